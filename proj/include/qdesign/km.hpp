#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qdesign/largesets.hpp"

namespace qdesign {

// ---------------------------------------------------------------------------
// Square matrices over GF(q)
// ---------------------------------------------------------------------------

struct Mat {
    unsigned n = 0;
    std::vector<std::uint16_t> a; // row-major n x n

    static Mat identity(unsigned n) {
        Mat m{n, std::vector<std::uint16_t>(std::size_t(n) * n, 0)};
        for (unsigned i = 0; i < n; ++i) m.a[std::size_t(i) * n + i] = 1;
        return m;
    }

    std::uint16_t at(unsigned i, unsigned j) const { return a[std::size_t(i) * n + j]; }
    std::uint16_t& at(unsigned i, unsigned j) { return a[std::size_t(i) * n + j]; }

    friend bool operator==(const Mat&, const Mat&) = default;
};

struct MatHash {
    std::size_t operator()(const Mat& m) const {
        std::uint64_t h = 14695981039346656037ull;
        for (std::uint16_t x : m.a) { h ^= x; h *= 1099511628211ull; }
        return static_cast<std::size_t>(h);
    }
};

inline Mat mat_mul(const Mat& x, const Mat& y, const Field& f) {
    unsigned n = x.n;
    Mat r{n, std::vector<std::uint16_t>(std::size_t(n) * n, 0)};
    for (unsigned i = 0; i < n; ++i)
        for (unsigned k = 0; k < n; ++k) {
            unsigned c = x.at(i, k);
            if (!c) continue;
            for (unsigned j = 0; j < n; ++j) {
                unsigned d = y.at(k, j);
                if (d) r.at(i, j) = static_cast<std::uint16_t>(f.add(r.at(i, j), f.mul(c, d)));
            }
        }
    return r;
}

inline Mat mat_pow(Mat base, Int e, const Field& f) {
    Mat r = Mat::identity(base.n);
    while (e > 0) {
        if ((e & 1) != 0) r = mat_mul(r, base, f);
        base = mat_mul(base, base, f);
        e >>= 1;
    }
    return r;
}

/// Row vector times matrix.
inline RowVec row_apply(const RowVec& x, const Mat& m, const Field& f) {
    RowVec r(m.n, 0);
    for (unsigned c = 0; c < m.n; ++c) {
        unsigned xc = x[c];
        if (!xc) continue;
        for (unsigned j = 0; j < m.n; ++j) {
            unsigned d = m.at(c, j);
            if (d) r[j] = static_cast<std::uint16_t>(f.add(r[j], f.mul(xc, d)));
        }
    }
    return r;
}

/// Image subspace under an invertible matrix acting on row vectors.
inline Subspace apply(const Subspace& s, const Mat& m, const Field& f) {
    std::vector<RowVec> rows;
    rows.reserve(s.dim());
    for (unsigned i = 0; i < s.dim(); ++i) rows.push_back(row_apply(s.row(i), m, f));
    return subspace_from_rows(rows, f, m.n);
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

struct MatrixGroup {
    Field field;
    unsigned dim = 0;
    std::vector<Mat> generators;
    Int order = 1;
};

inline MatrixGroup trivial_group(unsigned v, const Field& f) { return {f, v, {}, 1}; }

/// Element count by closure enumeration; throws TooLarge past `cap`.
inline Int closure_order(const std::vector<Mat>& gens, const Field& f, std::size_t cap = 1u << 20) {
    unsigned n = gens.empty() ? 0 : gens[0].n;
    std::unordered_set<Mat, MatHash> seen;
    std::vector<Mat> frontier;
    seen.insert(Mat::identity(n));
    frontier.push_back(Mat::identity(n));
    while (!frontier.empty()) {
        std::vector<Mat> next;
        for (const auto& m : frontier)
            for (const auto& g : gens) {
                Mat p = mat_mul(m, g, f);
                if (seen.insert(p).second) {
                    if (seen.size() > cap) throw TooLarge("group closure exceeds cap");
                    next.push_back(std::move(p));
                }
            }
        frontier = std::move(next);
    }
    return Int(seen.size());
}

namespace detail {

/// Encodings of the lexicographically smallest primitive polynomial
/// x^v + sum c_i x^i over GF(q), packed as n = sum c_i q^i.  Primitivity is
/// re-proven at construction time by an order computation.
struct PrimPolyEntry { unsigned q, v; std::uint32_t n; };
inline constexpr PrimPolyEntry kPrimPolyTable[] = {
    {2, 1, 1},  {2, 2, 3},  {2, 3, 3},  {2, 4, 3},   {2, 5, 5},  {2, 6, 3},
    {2, 7, 3},  {2, 8, 29}, {2, 9, 17}, {2, 10, 9},  {2, 11, 5}, {2, 12, 83},
    {2, 13, 27}, {2, 14, 43}, {2, 15, 3}, {2, 16, 45},
    {3, 1, 1},  {3, 2, 5},  {3, 3, 7},  {3, 4, 5},   {3, 5, 7},  {3, 6, 5},
    {3, 7, 16}, {3, 8, 29},
};

/// c *= x modulo the monic polynomial with low coefficients `mod`.
inline void mulx_mod(std::vector<std::uint16_t>& c, const std::vector<std::uint16_t>& mod,
                     const Field& f) {
    unsigned v = static_cast<unsigned>(c.size());
    unsigned top = c[v - 1];
    for (unsigned j = v - 1; j > 0; --j) c[j] = c[j - 1];
    c[0] = 0;
    if (top)
        for (unsigned j = 0; j < v; ++j)
            c[j] = static_cast<std::uint16_t>(f.sub(c[j], f.mul(top, mod[j])));
}

} // namespace detail

/// The Singer cycle of GL(v, q): the companion matrix of the tabulated
/// primitive polynomial, acting transitively on the q^v - 1 nonzero vectors
/// (checked at construction).  With `with_frobenius`, the matrix of x -> x^q
/// in the polynomial basis is added, extending the group to order v(q^v - 1).
inline MatrixGroup singer_group(unsigned v, const Field& f, bool with_frobenius) {
    const detail::PrimPolyEntry* entry = nullptr;
    for (const auto& e : detail::kPrimPolyTable)
        if (e.q == f.q() && e.v == v) { entry = &e; break; }
    if (!entry)
        throw NoPrimitivePolyTable("no primitive polynomial tabulated for q = " +
                                   std::to_string(f.q()) + ", v = " + std::to_string(v));
    std::vector<std::uint16_t> mod(v);
    {
        std::uint32_t n = entry->n;
        for (unsigned i = 0; i < v; ++i) { mod[i] = static_cast<std::uint16_t>(n % f.q()); n /= f.q(); }
    }

    Mat s{v, std::vector<std::uint16_t>(std::size_t(v) * v, 0)};
    for (unsigned i = 0; i + 1 < v; ++i) s.at(i, i + 1) = 1;
    for (unsigned j = 0; j < v; ++j) s.at(v - 1, j) = static_cast<std::uint16_t>(f.neg(mod[j]));

    // self-check: x has multiplicative order q^v - 1 modulo the tabulated
    // polynomial, i.e. the orbit of e_0 is all nonzero vectors
    {
        Int full = int_pow(f.q(), v) - 1;
        std::vector<std::uint16_t> cur(v, 0);
        cur[0] = 1;
        Int period = 0;
        do {
            detail::mulx_mod(cur, mod, f);
            ++period;
            if (period > full) throw InternalError("tabulated polynomial is not primitive");
        } while (!(cur[0] == 1 &&
                   std::all_of(cur.begin() + 1, cur.end(), [](std::uint16_t x) { return x == 0; })));
        if (period != full) throw InternalError("tabulated polynomial is not primitive");
    }

    MatrixGroup g{f, v, {s}, int_pow(f.q(), v) - 1};
    if (with_frobenius) {
        // row i of F = coordinates of x^(i q) modulo the polynomial
        Mat frob{v, std::vector<std::uint16_t>(std::size_t(v) * v, 0)};
        std::vector<std::uint16_t> cur(v, 0);
        cur[0] = 1;
        unsigned pos = 0;
        for (unsigned i = 0; i < v; ++i) {
            unsigned want = i * f.q();
            while (pos < want) { detail::mulx_mod(cur, mod, f); ++pos; }
            for (unsigned j = 0; j < v; ++j) frob.at(i, j) = cur[j];
        }
        // normalizer relations (row vectors act on the right, so composition
        // reads left to right): S F = F S^q, and F^v = 1
        if (mat_mul(s, frob, f) != mat_mul(frob, mat_pow(s, f.q(), f), f))
            throw InternalError("Frobenius does not normalize the Singer cycle");
        if (mat_pow(frob, v, f) != Mat::identity(v))
            throw InternalError("Frobenius matrix does not have order dividing v");
        g.generators.push_back(frob);
        g.order *= v;
    }
    return g;
}

/// Every verified design assembled from whole orbits is invariant under the
/// prescribing group; this checks it directly.
inline bool is_group_invariant(const Design& d, const MatrixGroup& g) {
    std::unordered_set<Subspace, SubspaceHash> blocks(d.blocks().begin(), d.blocks().end());
    for (const auto& gen : g.generators)
        for (const auto& b : d.blocks())
            if (!blocks.count(apply(b, gen, g.field))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

struct OrbitPartition {
    unsigned subspace_dim = 0;
    std::vector<Subspace> reps;                // lexicographically least member
    std::vector<std::uint64_t> lengths;
    std::vector<std::vector<Subspace>> members; // sorted ascending
    std::unordered_map<Subspace, std::uint32_t, SubspaceHash> orbit_of;
};

/// Orbit partition of the d-subspaces under the group, by breadth-first
/// closure from each unseen subspace in enumeration order.
inline OrbitPartition orbits(const MatrixGroup& g, unsigned d) {
    OrbitPartition out;
    out.subspace_dim = d;
    Int total = 0;
    for_each_subspace(g.dim, d, g.field, [&](const Subspace& start) {
        total += 1;
        if (out.orbit_of.count(start)) return;
        std::uint32_t idx = static_cast<std::uint32_t>(out.reps.size());
        std::vector<Subspace> frontier{start}, members{start};
        out.orbit_of.emplace(start, idx);
        while (!frontier.empty()) {
            std::vector<Subspace> next;
            for (const auto& m : frontier)
                for (const auto& gen : g.generators) {
                    Subspace img = apply(m, gen, g.field);
                    if (out.orbit_of.emplace(img, idx).second) {
                        members.push_back(img);
                        next.push_back(std::move(img));
                    }
                }
            frontier = std::move(next);
        }
        std::sort(members.begin(), members.end());
        out.reps.push_back(members.front());
        out.lengths.push_back(members.size());
        out.members.push_back(std::move(members));
    });
    Int covered = std::accumulate(out.lengths.begin(), out.lengths.end(), Int(0),
                                  [](Int a, std::uint64_t b) { return a + b; });
    if (covered != total || total != gauss(g.dim, d, g.field.q()))
        throw InternalError("orbit lengths do not sum to the Grassmannian size");
    return out;
}

// ---------------------------------------------------------------------------
// The Kramer-Mesner instance
// ---------------------------------------------------------------------------

struct KMInstance {
    ParameterSet target;
    Field field;
    OrbitPartition t_orbits;
    OrbitPartition k_orbits;
    std::vector<std::vector<std::uint64_t>> a; // a[i][j] = #{K in k-orbit j : T_i <= K}
    Int rhs;                                   // lambda
};

/// A[i][j] counts the k-superspaces of the i-th t-orbit representative that
/// fall into k-orbit j; superspaces are walked through the quotient modulo the
/// representative.  Row sums must equal [v-t k-t]_q.
inline KMInstance km_matrix(const OrbitPartition& t_orbits, const OrbitPartition& k_orbits,
                            const ParameterSet& target, const Field& f) {
    KMInstance inst{target, f, t_orbits, k_orbits, {}, target.lambda()};
    unsigned v = target.v(), t = target.t(), k = target.k();
    Int expected_row = gauss(v - t, k - t, f.q());
    inst.a.assign(inst.t_orbits.reps.size(),
                  std::vector<std::uint64_t>(inst.k_orbits.reps.size(), 0));
    for (std::size_t i = 0; i < inst.t_orbits.reps.size(); ++i) {
        QuotientMap qm(f, inst.t_orbits.reps[i]);
        Int row_sum = 0;
        for_each_subspace(qm.quotient_dim(), k - t, f, [&](const Subspace& sbar) {
            Subspace sup = qm.pull(sbar);
            auto it = inst.k_orbits.orbit_of.find(sup);
            if (it == inst.k_orbits.orbit_of.end())
                throw InternalError("km_matrix: superspace missing from k-orbit index");
            ++inst.a[i][it->second];
            row_sum += 1;
        });
        if (row_sum != expected_row)
            throw InternalError("km_matrix: row sum differs from [v-t k-t]_q");
    }
    return inst;
}

inline KMInstance build_km_instance(const MatrixGroup& g, const ParameterSet& target) {
    if (g.dim != target.v() || g.field.q() != target.q())
        throw ParamMismatch("group acts on the wrong space for " + target.str());
    OrbitPartition t_orbits = orbits(g, target.t());
    OrbitPartition k_orbits = orbits(g, target.k());
    return km_matrix(t_orbits, k_orbits, target, g.field);
}

// ---------------------------------------------------------------------------
// 0/1 solver
// ---------------------------------------------------------------------------

struct SolveOptions {
    std::uint64_t limit = 1;                  // stop after this many solutions; 0 = all
    std::uint64_t node_budget = 10'000'000;
};

struct SolveResult {
    std::vector<std::vector<std::uint8_t>> selections; // indexed by original column
    std::uint64_t nodes = 0;
    bool exhausted = false; // whole tree explored within the budget
};

namespace detail {

/// Depth-first search over the given columns (descending weight, then index).
/// Prunes on row overshoot and on unreachable remainder.  `emit` returns false
/// to stop the enumeration.  Returns true iff the tree was fully explored.
template <typename Emit>
bool km_solve_columns(const KMInstance& inst, const std::vector<unsigned>& cols,
                      std::uint64_t lambda, std::uint64_t node_budget, std::uint64_t& nodes,
                      Emit&& emit) {
    const std::size_t nrows = inst.a.size();
    std::vector<unsigned> order = cols;
    std::vector<std::uint64_t> weight(inst.a.empty() ? 0 : inst.a[0].size(), 0);
    for (unsigned j : cols)
        for (std::size_t i = 0; i < nrows; ++i) weight[j] += inst.a[i][j];
    std::stable_sort(order.begin(), order.end(),
                     [&](unsigned x, unsigned y) { return weight[x] > weight[y]; });

    // suffix[pos][i] = sum of a[i][order[p]] for p >= pos
    std::vector<std::vector<std::uint64_t>> suffix(order.size() + 1,
                                                   std::vector<std::uint64_t>(nrows, 0));
    for (std::size_t pos = order.size(); pos-- > 0;)
        for (std::size_t i = 0; i < nrows; ++i)
            suffix[pos][i] = suffix[pos + 1][i] + inst.a[i][order[pos]];

    std::vector<std::uint64_t> sums(nrows, 0);
    std::vector<std::uint8_t> chosen(inst.a.empty() ? 0 : inst.a[0].size(), 0);
    bool stopped = false, budget_hit = false;

    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (stopped || budget_hit) return;
        if (++nodes > node_budget) { budget_hit = true; return; }
        for (std::size_t i = 0; i < nrows; ++i)
            if (sums[i] + suffix[pos][i] < lambda) return; // cannot reach lambda
        if (pos == order.size()) {
            for (std::size_t i = 0; i < nrows; ++i)
                if (sums[i] != lambda) throw InternalError("km solver: bad leaf");
            if (!emit(chosen)) stopped = true;
            return;
        }
        unsigned col = order[pos];
        bool fits = true;
        for (std::size_t i = 0; i < nrows; ++i)
            if (sums[i] + inst.a[i][col] > lambda) { fits = false; break; }
        if (fits) {
            for (std::size_t i = 0; i < nrows; ++i) sums[i] += inst.a[i][col];
            chosen[col] = 1;
            self(self, pos + 1);
            chosen[col] = 0;
            for (std::size_t i = 0; i < nrows; ++i) sums[i] -= inst.a[i][col];
        }
        self(self, pos + 1);
    };
    rec(rec, 0);
    return !budget_hit && !stopped;
}

inline std::uint64_t lambda_as_u64(const Int& l) {
    if (l < 0 || l > Int(std::uint64_t(1) << 62))
        throw TooLarge("lambda does not fit the solver's counters");
    return l.convert_to<std::uint64_t>();
}

} // namespace detail

/// Enumerates 0/1 column selections with A x = lambda 1.
inline SolveResult solve(const KMInstance& inst, const SolveOptions& opt = {}) {
    SolveResult res;
    std::vector<unsigned> cols(inst.k_orbits.reps.size());
    for (unsigned j = 0; j < cols.size(); ++j) cols[j] = j;
    std::uint64_t lambda = detail::lambda_as_u64(inst.rhs);
    bool full = detail::km_solve_columns(
        inst, cols, lambda, opt.node_budget, res.nodes, [&](const std::vector<std::uint8_t>& sel) {
            res.selections.push_back(sel);
            return opt.limit == 0 || res.selections.size() < opt.limit;
        });
    res.exhausted = full;
    return res;
}

inline SolveResult solve(const KMInstance& inst, bool all_solutions, std::uint64_t limit,
                         std::uint64_t node_budget = 10'000'000) {
    SolveOptions opt;
    opt.limit = all_solutions ? 0 : limit;
    opt.node_budget = node_budget;
    return solve(inst, opt);
}

/// Union of the selected k-orbits as a Design with the instance's parameters.
inline Design assemble(const KMInstance& inst, const std::vector<std::uint8_t>& selection) {
    if (selection.size() != inst.k_orbits.reps.size())
        throw DimensionMismatch("selection length differs from the number of k-orbits");
    std::vector<Subspace> blocks;
    for (std::size_t j = 0; j < selection.size(); ++j)
        if (selection[j])
            blocks.insert(blocks.end(), inst.k_orbits.members[j].begin(),
                          inst.k_orbits.members[j].end());
    return Design(inst.target, inst.field, std::move(blocks));
}

/// Independent soundness check of a solver output.
inline bool selection_satisfies(const KMInstance& inst, const std::vector<std::uint8_t>& sel) {
    for (const auto& row : inst.a) {
        Int s = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (sel[j]) s += row[j];
        if (s != inst.rhs) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Large-set search
// ---------------------------------------------------------------------------

struct LsSearchOptions {
    std::uint64_t node_budget = 50'000'000;
};

/// Partitions the full Grassmannian into N designs by running the solver
/// level by level on the unused k-orbits, backtracking across levels.
inline std::optional<LargeSet> ls_search(const MatrixGroup& g, unsigned t, unsigned k, unsigned N,
                                         const LsSearchOptions& opt = {}) {
    unsigned v = g.dim, q = g.field.q();
    Int need = gauss(v - t, k - t, q);
    if (N == 0 || need % N != 0)
        throw NMismatch("N = " + std::to_string(N) + " does not divide [v-t k-t]_q = " + need.str());
    ParameterSet member(t, v, k, need / N, q);
    KMInstance inst = build_km_instance(g, member);
    std::uint64_t lambda = detail::lambda_as_u64(inst.rhs);

    std::size_t ncols = inst.k_orbits.reps.size();
    std::vector<std::uint8_t> used(ncols, 0);
    std::vector<std::vector<std::uint8_t>> picked(N);
    std::uint64_t nodes = 0;
    bool found = false;

    auto level = [&](auto&& self, unsigned depth) -> void {
        if (found) return;
        if (depth == N) {
            for (std::size_t j = 0; j < ncols; ++j)
                if (!used[j]) return; // leftover orbits: not a partition
            found = true;
            return;
        }
        std::vector<unsigned> cols;
        for (unsigned j = 0; j < ncols; ++j)
            if (!used[j]) cols.push_back(j);
        detail::km_solve_columns(inst, cols, lambda, opt.node_budget, nodes,
                                 [&](const std::vector<std::uint8_t>& sel) {
                                     picked[depth] = sel;
                                     for (std::size_t j = 0; j < ncols; ++j)
                                         if (sel[j]) used[j] = 1;
                                     self(self, depth + 1);
                                     if (found) return false;
                                     for (std::size_t j = 0; j < ncols; ++j)
                                         if (sel[j]) used[j] = 0;
                                     return true;
                                 });
    };
    level(level, 0);
    if (!found) return std::nullopt;

    std::vector<Design> members;
    members.reserve(N);
    for (unsigned i = 0; i < N; ++i) members.push_back(assemble(inst, picked[i]));
    return LargeSet(member, std::move(members));
}

} // namespace qdesign
