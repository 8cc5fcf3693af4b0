#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdesign/errors.hpp"
#include "qdesign/numeric.hpp"

namespace qdesign {

/// One vector of GF(q)^v; each coordinate is an element index in [0, q).
using RowVec = std::vector<std::uint16_t>;

// ---------------------------------------------------------------------------
// Field
// ---------------------------------------------------------------------------

/// GF(q) for a prime power q = p^e, 2 <= q <= 2^16.
///
/// For e = 1 arithmetic is mod p.  For e > 1 an element is the integer whose
/// base-p digits are the coefficients of its polynomial representative; the
/// modulus is the lexicographically smallest primitive polynomial of degree e
/// (smallest when the coefficient vector c_0..c_{e-1} is read as a base-p
/// integer), so multiplication runs on exp/log tables and the encoding is
/// identical across runs and platforms.
class Field {
public:
    explicit Field(unsigned q) : q_(q) {
        if (q > 65536u) throw TooLarge("field order " + std::to_string(q) + " exceeds 2^16");
        auto pe = prime_power_decompose(q);
        if (!pe) throw NotPrimePower(std::to_string(q) + " is not a prime power");
        p_ = pe->first;
        e_ = pe->second;
        if (e_ > 1) build_tables();
    }

    unsigned q() const { return q_; }
    unsigned p() const { return p_; }
    unsigned e() const { return e_; }

    unsigned add(unsigned a, unsigned b) const {
        if (e_ == 1) { unsigned s = a + b; return s >= q_ ? s - q_ : s; }
        if (p_ == 2) return a ^ b;
        unsigned r = 0, m = 1;
        while (a || b) {
            unsigned d = (a % p_ + b % p_) % p_;
            r += d * m;
            a /= p_; b /= p_; m *= p_;
        }
        return r;
    }

    unsigned neg(unsigned a) const {
        if (e_ == 1) return a == 0 ? 0 : q_ - a;
        if (p_ == 2) return a;
        unsigned r = 0, m = 1;
        while (a) {
            unsigned d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * m;
            a /= p_; m *= p_;
        }
        return r;
    }

    unsigned sub(unsigned a, unsigned b) const { return add(a, neg(b)); }

    unsigned mul(unsigned a, unsigned b) const {
        if (a == 0 || b == 0) return 0;
        if (e_ == 1) return static_cast<unsigned>(std::uint64_t(a) * b % q_);
        std::uint32_t s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }

    unsigned inv(unsigned a) const {
        if (a == 0) throw Error("division by zero in GF(" + std::to_string(q_) + ")");
        if (e_ == 1) {
            // a^(p-2) by repeated squaring
            unsigned r = 1, base = a, n = q_ - 2;
            while (n) {
                if (n & 1) r = static_cast<unsigned>(std::uint64_t(r) * base % q_);
                base = static_cast<unsigned>(std::uint64_t(base) * base % q_);
                n >>= 1;
            }
            return r;
        }
        std::uint32_t s = (q_ - 1 - log_[a]) % (q_ - 1);
        return exp_[s];
    }

    /// Modulus coefficients c_0..c_e (monic, c_e = 1); empty for e = 1.
    const std::vector<unsigned>& modulus() const { return modulus_; }

    bool operator==(const Field& o) const { return q_ == o.q_; }

private:
    void build_tables() {
        // Search coefficient encodings in ascending order; a candidate is
        // accepted iff the multiplicative order of x mod (p, poly) is q-1,
        // which simultaneously proves irreducibility and primitivity.  The
        // successful walk already is the exp table.
        std::vector<unsigned> c(e_);
        for (unsigned n = 1; n < q_; ++n) {
            unsigned m = n;
            for (unsigned i = 0; i < e_; ++i) { c[i] = m % p_; m /= p_; }
            if (c[0] == 0) continue; // x would divide the modulus
            std::vector<unsigned> cur(e_, 0);
            cur[0] = 1;
            std::vector<std::uint16_t> exp;
            exp.reserve(q_);
            exp.push_back(1);
            bool primitive = false;
            for (unsigned i = 1; i < q_; ++i) {
                // cur *= x, reduced by x^e = -sum c_j x^j
                unsigned top = cur[e_ - 1];
                for (unsigned j = e_ - 1; j > 0; --j) cur[j] = cur[j - 1];
                cur[0] = 0;
                if (top) {
                    for (unsigned j = 0; j < e_; ++j)
                        cur[j] = (cur[j] + (p_ - top * c[j] % p_)) % p_;
                }
                unsigned packed = 0, mm = 1;
                for (unsigned j = 0; j < e_; ++j) { packed += cur[j] * mm; mm *= p_; }
                if (packed == 1) { primitive = (i == q_ - 1); break; }
                exp.push_back(static_cast<std::uint16_t>(packed));
            }
            if (!primitive) continue;
            exp_ = std::move(exp);
            log_.assign(q_, 0);
            for (unsigned i = 0; i < q_ - 1; ++i) log_[exp_[i]] = static_cast<std::uint16_t>(i);
            modulus_.assign(c.begin(), c.end());
            modulus_.push_back(1);
            return;
        }
        throw InternalError("no primitive polynomial found for GF(" + std::to_string(q_) + ")");
    }

    unsigned q_, p_ = 0, e_ = 0;
    std::vector<std::uint16_t> exp_, log_;
    std::vector<unsigned> modulus_;
};

inline Field field_make(unsigned q) { return Field(q); }

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

namespace detail {

inline char digit_to_char(unsigned d) {
    return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10);
}

inline std::optional<unsigned> char_to_digit(char c) {
    if (c >= '0' && c <= '9') return unsigned(c - '0');
    if (c >= 'a' && c <= 'z') return unsigned(c - 'a' + 10);
    return std::nullopt;
}

inline std::uint64_t pack_row(const RowVec& r) {
    std::uint64_t w = 0;
    for (std::size_t j = 0; j < r.size(); ++j)
        if (r[j]) w |= std::uint64_t(1) << j;
    return w;
}

inline RowVec unpack_row(std::uint64_t w, unsigned v) {
    RowVec r(v, 0);
    for (unsigned j = 0; j < v; ++j) r[j] = (w >> j) & 1;
    return r;
}

} // namespace detail

/// A subspace of GF(q)^v held as its unique reduced row echelon basis.
/// Two Subspace values are equal iff their stored bytes agree.
class Subspace {
public:
    Subspace() = default;

    /// Caller guarantees coords is a k x v RREF basis over GF(q).
    static Subspace from_rref_unchecked(unsigned v, unsigned q, unsigned k,
                                        std::vector<std::uint16_t> coords) {
        Subspace s;
        s.v_ = v; s.q_ = q; s.k_ = k;
        s.coords_ = std::move(coords);
        return s;
    }

    unsigned ambient() const { return v_; }
    unsigned dim() const { return k_; }
    unsigned q() const { return q_; }
    bool is_zero() const { return k_ == 0; }

    std::uint16_t at(unsigned row, unsigned col) const { return coords_[std::size_t(row) * v_ + col]; }

    RowVec row(unsigned i) const {
        return RowVec(coords_.begin() + std::ptrdiff_t(i) * v_,
                      coords_.begin() + std::ptrdiff_t(i + 1) * v_);
    }

    std::vector<RowVec> rows() const {
        std::vector<RowVec> rs;
        rs.reserve(k_);
        for (unsigned i = 0; i < k_; ++i) rs.push_back(row(i));
        return rs;
    }

    const std::vector<std::uint16_t>& coords() const { return coords_; }

    /// Pivot columns, ascending.
    std::vector<unsigned> pivots() const {
        std::vector<unsigned> ps;
        ps.reserve(k_);
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = 0; j < v_; ++j)
                if (at(i, j)) { ps.push_back(j); break; }
        return ps;
    }

    /// Rows packed as bitmasks (meaningful for q = 2, v <= 64).
    std::vector<std::uint64_t> packed_rows() const {
        std::vector<std::uint64_t> ws(k_);
        for (unsigned i = 0; i < k_; ++i) ws[i] = detail::pack_row(row(i));
        return ws;
    }

    /// Text encoding: basis rows as base-q digit strings joined by ';'.
    std::string key() const {
        if (q_ > 36) throw FormatError("subspace text encoding supports q <= 36");
        std::string s;
        for (unsigned i = 0; i < k_; ++i) {
            if (i) s += ';';
            for (unsigned j = 0; j < v_; ++j) s += detail::digit_to_char(at(i, j));
        }
        return s;
    }

    friend auto operator<=>(const Subspace&, const Subspace&) = default;

private:
    unsigned v_ = 0, q_ = 0, k_ = 0;
    std::vector<std::uint16_t> coords_; // row-major RREF basis
};

struct SubspaceHash {
    std::size_t operator()(const Subspace& s) const {
        std::uint64_t h = 14695981039346656037ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix(s.ambient()); mix(s.q()); mix(s.dim());
        for (std::uint16_t c : s.coords()) mix(c);
        return static_cast<std::size_t>(h);
    }
};

inline Subspace zero_subspace(unsigned v, unsigned q) {
    return Subspace::from_rref_unchecked(v, q, 0, {});
}

inline Subspace full_space(unsigned v, unsigned q) {
    std::vector<std::uint16_t> coords(std::size_t(v) * v, 0);
    for (unsigned i = 0; i < v; ++i) coords[std::size_t(i) * v + i] = 1;
    return Subspace::from_rref_unchecked(v, q, v, std::move(coords));
}

// ---------------------------------------------------------------------------
// Row reduction
// ---------------------------------------------------------------------------

/// Incremental RREF basis.  For q = 2 and width <= 64 rows are bitmasks and
/// elimination is word-parallel XOR; otherwise table-driven field arithmetic.
class Eliminator {
public:
    Eliminator(unsigned width, const Field& f)
        : width_(width), f_(&f), words_(f.q() == 2 && width <= 64) {}

    /// Load rows of a subspace already in RREF.
    void seed(const Subspace& s) {
        for (unsigned i = 0; i < s.dim(); ++i) {
            RowVec r = s.row(i);
            unsigned piv = 0;
            while (piv < width_ && r[piv] == 0) ++piv;
            if (words_) wrows_.push_back(detail::pack_row(r));
            else rows_.push_back(std::move(r));
            pivots_.push_back(piv);
        }
    }

    void reduce(RowVec& r) const {
        if (words_) {
            std::uint64_t w = detail::pack_row(r);
            reduce_word(w);
            r = detail::unpack_row(w, width_);
            return;
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            unsigned c = r[pivots_[i]];
            if (c) row_submul(r, rows_[i], c);
        }
    }

    void reduce_word(std::uint64_t& w) const {
        for (std::size_t i = 0; i < wrows_.size(); ++i)
            if ((w >> pivots_[i]) & 1) w ^= wrows_[i];
    }

    bool add(RowVec r) {
        if (words_) return add_word(detail::pack_row(r));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            unsigned c = r[pivots_[i]];
            if (c) row_submul(r, rows_[i], c);
        }
        unsigned piv = 0;
        while (piv < width_ && r[piv] == 0) ++piv;
        if (piv == width_) return false;
        unsigned c = f_->inv(r[piv]);
        if (c != 1)
            for (auto& x : r) x = static_cast<std::uint16_t>(f_->mul(x, c));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            unsigned d = rows_[i][piv];
            if (d) row_submul(rows_[i], r, d);
        }
        insert_sorted(piv, std::move(r), 0);
        return true;
    }

    bool add_word(std::uint64_t w) {
        reduce_word(w);
        if (w == 0) return false;
        unsigned piv = static_cast<unsigned>(std::countr_zero(w));
        for (std::size_t i = 0; i < wrows_.size(); ++i)
            if ((wrows_[i] >> piv) & 1) wrows_[i] ^= w;
        insert_sorted(piv, {}, w);
        return true;
    }

    unsigned rank() const { return static_cast<unsigned>(pivots_.size()); }

    std::vector<RowVec> basis() const {
        std::vector<RowVec> out;
        out.reserve(pivots_.size());
        for (std::size_t i = 0; i < pivots_.size(); ++i)
            out.push_back(words_ ? detail::unpack_row(wrows_[i], width_) : rows_[i]);
        return out;
    }

    Subspace to_subspace() const {
        std::vector<std::uint16_t> coords;
        coords.reserve(std::size_t(rank()) * width_);
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            RowVec r = words_ ? detail::unpack_row(wrows_[i], width_) : rows_[i];
            coords.insert(coords.end(), r.begin(), r.end());
        }
        return Subspace::from_rref_unchecked(width_, f_->q(), rank(), std::move(coords));
    }

private:
    void row_submul(RowVec& dst, const RowVec& src, unsigned c) const {
        for (unsigned j = 0; j < width_; ++j)
            if (src[j]) dst[j] = static_cast<std::uint16_t>(f_->sub(dst[j], f_->mul(c, src[j])));
    }

    void insert_sorted(unsigned piv, RowVec r, std::uint64_t w) {
        std::size_t pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
        pivots_.insert(pivots_.begin() + std::ptrdiff_t(pos), piv);
        if (words_) wrows_.insert(wrows_.begin() + std::ptrdiff_t(pos), w);
        else rows_.insert(rows_.begin() + std::ptrdiff_t(pos), std::move(r));
    }

    unsigned width_;
    const Field* f_;
    bool words_;
    std::vector<RowVec> rows_;
    std::vector<unsigned> pivots_;
    std::vector<std::uint64_t> wrows_;
};

/// Canonicalize a list of generating rows; result spans the same space.
inline std::pair<Subspace, unsigned> rref(const std::vector<RowVec>& rows, const Field& f) {
    std::size_t v = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != v)
            throw DimensionMismatch("ragged input rows to rref");
        for (auto x : r)
            if (x >= f.q()) throw Error("coordinate out of range for GF(" + std::to_string(f.q()) + ")");
    }
    Eliminator el(static_cast<unsigned>(v), f);
    for (const auto& r : rows) el.add(r);
    return {el.to_subspace(), el.rank()};
}

inline Subspace subspace_from_rows(const std::vector<RowVec>& rows, const Field& f) {
    return rref(rows, f).first;
}

/// Same, but with the ambient dimension given explicitly so an empty row list
/// yields the zero subspace of the right space.
inline Subspace subspace_from_rows(const std::vector<RowVec>& rows, const Field& f, unsigned width) {
    Eliminator el(width, f);
    for (const auto& r : rows) {
        if (r.size() != width) throw DimensionMismatch("row length disagrees with ambient dimension");
        el.add(r);
    }
    return el.to_subspace();
}

/// RREF of bitmask rows over GF(2).
inline Subspace subspace_from_words(unsigned v, const std::vector<std::uint64_t>& rows, const Field& f) {
    Eliminator el(v, f);
    for (auto w : rows) el.add_word(w);
    return el.to_subspace();
}

// ---------------------------------------------------------------------------
// Lattice operations
// ---------------------------------------------------------------------------

namespace detail {
inline void check_ambient(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient() || a.q() != b.q())
        throw AmbientMismatch("subspaces live in different ambient spaces");
}
} // namespace detail

/// True iff inner <= outer.
inline bool contains(const Subspace& outer, const Subspace& inner, const Field& f) {
    detail::check_ambient(outer, inner);
    if (inner.dim() > outer.dim()) return false;
    Eliminator el(outer.ambient(), f);
    el.seed(outer);
    for (unsigned i = 0; i < inner.dim(); ++i) {
        RowVec r = inner.row(i);
        el.reduce(r);
        if (std::any_of(r.begin(), r.end(), [](std::uint16_t x) { return x != 0; }))
            return false;
    }
    return true;
}

inline Subspace sum(const Subspace& a, const Subspace& b, const Field& f) {
    detail::check_ambient(a, b);
    Eliminator el(a.ambient(), f);
    el.seed(a);
    for (unsigned i = 0; i < b.dim(); ++i) el.add(b.row(i));
    return el.to_subspace();
}

/// Meet of the subspace lattice, by the Zassenhaus block trick.
inline Subspace intersection(const Subspace& a, const Subspace& b, const Field& f) {
    detail::check_ambient(a, b);
    unsigned v = a.ambient();
    Eliminator el(2 * v, f);
    for (unsigned i = 0; i < a.dim(); ++i) {
        RowVec r = a.row(i);
        RowVec big(2 * v, 0);
        std::copy(r.begin(), r.end(), big.begin());
        std::copy(r.begin(), r.end(), big.begin() + v);
        el.add(std::move(big));
    }
    for (unsigned i = 0; i < b.dim(); ++i) {
        RowVec r = b.row(i);
        RowVec big(2 * v, 0);
        std::copy(r.begin(), r.end(), big.begin());
        el.add(std::move(big));
    }
    std::vector<RowVec> meet_rows;
    for (const auto& r : el.basis()) {
        if (std::any_of(r.begin(), r.begin() + v, [](std::uint16_t x) { return x != 0; }))
            continue;
        meet_rows.emplace_back(r.begin() + v, r.end());
    }
    return subspace_from_rows(meet_rows, f, v);
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Streams every k-subspace of GF(q)^v exactly once: pivot-column patterns in
/// lexicographic order, free entries in base-q counting order.
class SubspaceEnumerator {
public:
    SubspaceEnumerator(unsigned v, unsigned k, const Field& f)
        : v_(v), k_(k), f_(&f), done_(k > v) {
        if (done_) return;
        pattern_.resize(k_);
        for (unsigned i = 0; i < k_; ++i) pattern_[i] = i;
        rebuild_cells();
    }

    bool next(Subspace& out) {
        if (done_) return false;
        out = emit();
        advance();
        return true;
    }

private:
    Subspace emit() const {
        std::vector<std::uint16_t> coords(std::size_t(k_) * v_, 0);
        for (unsigned i = 0; i < k_; ++i) coords[std::size_t(i) * v_ + pattern_[i]] = 1;
        for (std::size_t c = 0; c < cells_.size(); ++c)
            coords[std::size_t(cells_[c].first) * v_ + cells_[c].second] = digits_[c];
        return Subspace::from_rref_unchecked(v_, f_->q(), k_, std::move(coords));
    }

    void advance() {
        // odometer over free cells, last cell fastest
        for (std::size_t c = cells_.size(); c-- > 0;) {
            if (++digits_[c] < f_->q()) return;
            digits_[c] = 0;
        }
        // next pivot pattern in lexicographic order
        unsigned i = k_;
        while (i-- > 0) {
            if (pattern_[i] < v_ - k_ + i) {
                ++pattern_[i];
                for (unsigned j = i + 1; j < k_; ++j) pattern_[j] = pattern_[j - 1] + 1;
                rebuild_cells();
                return;
            }
            if (i == 0) break;
        }
        done_ = true;
    }

    void rebuild_cells() {
        cells_.clear();
        std::vector<bool> is_pivot(v_, false);
        for (unsigned p : pattern_) is_pivot[p] = true;
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = pattern_[i] + 1; j < v_; ++j)
                if (!is_pivot[j]) cells_.emplace_back(i, j);
        digits_.assign(cells_.size(), 0);
    }

    unsigned v_, k_;
    const Field* f_;
    bool done_;
    std::vector<unsigned> pattern_;
    std::vector<std::pair<unsigned, unsigned>> cells_;
    std::vector<std::uint16_t> digits_;
};

template <typename Fn>
void for_each_subspace(unsigned v, unsigned k, const Field& f, Fn&& fn) {
    SubspaceEnumerator en(v, k, f);
    Subspace s;
    while (en.next(s)) fn(s);
}

inline std::vector<Subspace> all_subspaces(unsigned v, unsigned k, const Field& f) {
    std::vector<Subspace> out;
    for_each_subspace(v, k, f, [&](const Subspace& s) { out.push_back(s); });
    return out;
}

/// Streams the t-subspaces of a block (a subspace of dimension k >= t),
/// canonicalized in the ambient space.
template <typename Fn>
void for_each_subspace_of(const Subspace& block, unsigned t, const Field& f, Fn&& fn) {
    unsigned k = block.dim(), v = block.ambient();
    if (t > k) return;
    if (t == 0) { fn(zero_subspace(v, f.q())); return; }
    if (f.q() == 2 && v <= 64) {
        std::vector<std::uint64_t> brows = block.packed_rows();
        SubspaceEnumerator en(k, t, f);
        Subspace coeff;
        std::vector<std::uint64_t> rows(t);
        while (en.next(coeff)) {
            for (unsigned i = 0; i < t; ++i) {
                std::uint64_t w = 0;
                for (unsigned c = 0; c < k; ++c)
                    if (coeff.at(i, c)) w ^= brows[c];
                rows[i] = w;
            }
            fn(subspace_from_words(v, rows, f));
        }
        return;
    }
    SubspaceEnumerator en(k, t, f);
    Subspace coeff;
    while (en.next(coeff)) {
        std::vector<RowVec> rows(t, RowVec(v, 0));
        for (unsigned i = 0; i < t; ++i)
            for (unsigned c = 0; c < k; ++c) {
                unsigned a = coeff.at(i, c);
                if (!a) continue;
                for (unsigned j = 0; j < v; ++j) {
                    unsigned b = block.at(c, j);
                    if (b) rows[i][j] = static_cast<std::uint16_t>(f.add(rows[i][j], f.mul(a, b)));
                }
            }
        fn(subspace_from_rows(rows, f));
    }
}

// ---------------------------------------------------------------------------
// Complements
// ---------------------------------------------------------------------------

/// Streams every K <= w with K + u = w and K meeting u trivially.
/// There are exactly q^(dim u * (dim w - dim u)) of them.
template <typename Fn>
void for_each_complement(const Subspace& u, const Subspace& w, const Field& f, Fn&& fn) {
    detail::check_ambient(u, w);
    if (!contains(w, u, f)) throw NotContained("u is not a subspace of w");
    unsigned v = w.ambient(), du = u.dim(), dm = w.dim() - du;

    // seed rows: w-rows independent modulo u
    std::vector<RowVec> seed;
    Eliminator el(v, f);
    el.seed(u);
    for (unsigned i = 0; i < w.dim(); ++i) {
        RowVec r = w.row(i);
        if (el.add(r)) seed.push_back(std::move(r));
    }

    if (du == 0 || dm == 0) { fn(subspace_from_rows(seed, f, v)); return; }

    // K = rowspace of (seed_i + sum_j M[i][j] u_j) over all dm x du matrices M
    std::vector<std::uint16_t> m(std::size_t(dm) * du, 0);
    std::vector<RowVec> urows = u.rows();
    for (;;) {
        std::vector<RowVec> rows = seed;
        for (unsigned i = 0; i < dm; ++i)
            for (unsigned j = 0; j < du; ++j) {
                unsigned c = m[std::size_t(i) * du + j];
                if (!c) continue;
                for (unsigned x = 0; x < v; ++x)
                    if (urows[j][x])
                        rows[i][x] = static_cast<std::uint16_t>(
                            f.add(rows[i][x], f.mul(c, urows[j][x])));
            }
        fn(subspace_from_rows(rows, f, v));
        std::size_t c = m.size();
        while (c-- > 0) {
            if (++m[c] < f.q()) break;
            m[c] = 0;
            if (c == 0) return;
        }
    }
}

inline std::vector<Subspace> complements(const Subspace& u, const Subspace& w, const Field& f) {
    std::vector<Subspace> out;
    for_each_complement(u, w, f, [&](const Subspace& k) { out.push_back(k); });
    return out;
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// Fixes coordinates on V/U: the coordinate columns are the ascending columns
/// that are not pivots of U (basis completion by smallest unit vectors).
class QuotientMap {
public:
    QuotientMap(const Field& f, Subspace u) : f_(f), u_(std::move(u)) {
        std::vector<bool> is_pivot(u_.ambient(), false);
        for (unsigned p : u_.pivots()) is_pivot[p] = true;
        for (unsigned j = 0; j < u_.ambient(); ++j)
            if (!is_pivot[j]) cols_.push_back(j);
    }

    const Subspace& kernel() const { return u_; }
    unsigned ambient_dim() const { return u_.ambient(); }
    unsigned quotient_dim() const { return static_cast<unsigned>(cols_.size()); }

    /// Image of a vector's class in quotient coordinates.
    RowVec push_vector(RowVec x) const {
        Eliminator el(u_.ambient(), f_);
        el.seed(u_);
        el.reduce(x);
        RowVec out(cols_.size());
        for (std::size_t i = 0; i < cols_.size(); ++i) out[i] = x[cols_[i]];
        return out;
    }

    /// Image of s (which must contain the kernel); dim drops by dim(kernel).
    Subspace push(const Subspace& s) const {
        if (!contains(s, u_, f_)) throw NotContained("push requires the kernel inside s");
        std::vector<RowVec> rows;
        rows.reserve(s.dim());
        for (unsigned i = 0; i < s.dim(); ++i) rows.push_back(push_vector(s.row(i)));
        return subspace_from_rows(rows, f_, quotient_dim());
    }

    /// Preimage of a subspace of the quotient; contains the kernel.
    Subspace pull(const Subspace& sbar) const {
        if (sbar.ambient() != quotient_dim() || sbar.q() != f_.q())
            throw AmbientMismatch("pull argument lives in the wrong space");
        Eliminator el(u_.ambient(), f_);
        el.seed(u_);
        for (unsigned i = 0; i < sbar.dim(); ++i) {
            RowVec r(u_.ambient(), 0);
            for (std::size_t j = 0; j < cols_.size(); ++j) r[cols_[j]] = sbar.at(i, static_cast<unsigned>(j));
            el.add(std::move(r));
        }
        return el.to_subspace();
    }

private:
    Field f_;
    Subspace u_;
    std::vector<unsigned> cols_;
};

inline QuotientMap quotient_map(const Field& f, const Subspace& u) { return QuotientMap(f, u); }

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

/// Orthogonal complement under the standard dot product.
inline Subspace orthogonal_complement(const Subspace& s, const Field& f) {
    unsigned v = s.ambient(), k = s.dim();
    std::vector<unsigned> piv = s.pivots();
    std::vector<bool> is_pivot(v, false);
    for (unsigned p : piv) is_pivot[p] = true;
    std::vector<RowVec> rows;
    rows.reserve(v - k);
    for (unsigned fc = 0; fc < v; ++fc) {
        if (is_pivot[fc]) continue;
        RowVec w(v, 0);
        w[fc] = 1;
        for (unsigned i = 0; i < k; ++i)
            w[piv[i]] = static_cast<std::uint16_t>(f.neg(s.at(i, fc)));
        rows.push_back(std::move(w));
    }
    return subspace_from_rows(rows, f, v);
}

// ---------------------------------------------------------------------------
// Text encoding and randomness
// ---------------------------------------------------------------------------

/// Parse rows of the ';'-separated digit encoding; "" is the zero subspace.
inline std::vector<RowVec> parse_subspace_rows(const std::string& text, unsigned v, unsigned q) {
    if (q > 36) throw FormatError("subspace text encoding supports q <= 36");
    std::vector<RowVec> rows;
    if (text.empty()) return rows;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (part.size() != v)
            throw FormatError("row '" + part + "' has length " + std::to_string(part.size()) +
                              ", expected " + std::to_string(v));
        RowVec r(v);
        for (unsigned j = 0; j < v; ++j) {
            auto d = detail::char_to_digit(part[j]);
            if (!d || *d >= q)
                throw FormatError("bad digit '" + std::string(1, part[j]) + "' for GF(" +
                                  std::to_string(q) + ")");
            r[j] = static_cast<std::uint16_t>(*d);
        }
        rows.push_back(std::move(r));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return rows;
}

/// Parse and canonicalize; requires the text to already be in RREF.
inline Subspace decode_subspace(const std::string& text, unsigned v, const Field& f) {
    Subspace s = subspace_from_rows(parse_subspace_rows(text, v, f.q()), f, v);
    if (s.key() != text)
        throw FormatError("subspace '" + text + "' is not a reduced row echelon basis");
    return s;
}

/// Uniformly random d-subspace of GF(q)^v.
template <typename Rng>
Subspace random_subspace(unsigned v, unsigned d, const Field& f, Rng& rng) {
    if (d == 0) return zero_subspace(v, f.q());
    std::uniform_int_distribution<unsigned> coord(0, f.q() - 1);
    for (;;) {
        std::vector<RowVec> rows(d, RowVec(v));
        for (auto& r : rows)
            for (auto& x : r) x = static_cast<std::uint16_t>(coord(rng));
        auto [s, rank] = rref(rows, f);
        if (rank == d) return s;
    }
}

/// Uniformly random d-subspace of w.
template <typename Rng>
Subspace random_subspace_of(const Subspace& w, unsigned d, const Field& f, Rng& rng) {
    if (d > w.dim()) throw BadDim("random_subspace_of: d exceeds dim(w)");
    if (d == 0) return zero_subspace(w.ambient(), f.q());
    std::uniform_int_distribution<unsigned> coord(0, f.q() - 1);
    unsigned v = w.ambient(), kw = w.dim();
    for (;;) {
        std::vector<RowVec> rows(d, RowVec(v, 0));
        for (auto& r : rows) {
            RowVec c(kw);
            for (auto& x : c) x = static_cast<std::uint16_t>(coord(rng));
            for (unsigned i = 0; i < kw; ++i) {
                if (!c[i]) continue;
                for (unsigned j = 0; j < v; ++j) {
                    unsigned b = w.at(i, j);
                    if (b) r[j] = static_cast<std::uint16_t>(f.add(r[j], f.mul(c[i], b)));
                }
            }
        }
        auto [s, rank] = rref(rows, f);
        if (rank == d) return s;
    }
}

} // namespace qdesign
