#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qdesign/gfq.hpp"
#include "qdesign/params.hpp"

namespace qdesign {

enum class VerifyState { unverified, verified, failed };

/// A parameter set together with a set of candidate blocks.  Blocks are kept
/// sorted by their canonical form; duplicates are rejected (simple designs
/// only).  Whether the incidence condition actually holds is tracked by the
/// tri-state, set by verify().
class Design {
public:
    Design(ParameterSet params, Field field, std::vector<Subspace> blocks)
        : params_(std::move(params)), field_(std::move(field)), blocks_(std::move(blocks)) {
        if (field_.q() != params_.q())
            throw ParamMismatch("field order disagrees with parameter set " + params_.str());
        for (const auto& b : blocks_) {
            if (b.ambient() != params_.v() || b.q() != params_.q())
                throw AmbientMismatch("block ambient space disagrees with " + params_.str());
            if (b.dim() != params_.k())
                throw BadDim("block dimension " + std::to_string(b.dim()) + " in " + params_.str());
        }
        std::sort(blocks_.begin(), blocks_.end());
        if (std::adjacent_find(blocks_.begin(), blocks_.end()) != blocks_.end())
            throw Error("duplicate block; designs are simple");
    }

    const ParameterSet& params() const { return params_; }
    const Field& field() const { return field_; }
    const std::vector<Subspace>& blocks() const { return blocks_; }
    VerifyState state() const { return state_; }
    void set_state(VerifyState s) { state_ = s; }

private:
    ParameterSet params_;
    Field field_;
    std::vector<Subspace> blocks_;
    VerifyState state_ = VerifyState::unverified;
};

struct VerifyReport {
    bool ok = false;
    Int checked_t_subspaces = 0;           // distinct t-subspaces that met a block
    std::uint64_t min_count = 0, max_count = 0;
    std::optional<std::pair<Subspace, std::uint64_t>> first_violation;
};

/// Exhaustive verification: for every block, enumerate its t-subspaces into a
/// counter; the design property holds iff the counter has exactly [v t]_q keys,
/// all with value lambda.  Blocks are partitioned across workers; the merged
/// result does not depend on the worker count.
inline VerifyReport verify(Design& d, unsigned threads = 0) {
    const ParameterSet& p = d.params();
    const auto& blocks = d.blocks();
    using Map = std::unordered_map<Subspace, std::uint64_t, SubspaceHash>;

    unsigned nt = resolve_threads(threads);
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, blocks.empty() ? 1 : blocks.size()));
    std::vector<Map> maps(nt);
    auto work = [&](unsigned w) {
        Map& m = maps[w];
        for (std::size_t i = w; i < blocks.size(); i += nt)
            for_each_subspace_of(blocks[i], p.t(), d.field(),
                                 [&](const Subspace& tsub) { ++m[tsub]; });
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < nt; ++w) pool.emplace_back(work, w);
        work(0);
        for (auto& th : pool) th.join();
    }
    Map counts = std::move(maps[0]);
    for (unsigned w = 1; w < nt; ++w)
        for (auto& [key, c] : maps[w]) counts[key] += c;

    VerifyReport rep;
    rep.checked_t_subspaces = Int(counts.size());
    Int expected = gauss(p.v(), p.t(), p.q());

    std::uint64_t mn = UINT64_MAX, mx = 0;
    for (const auto& [key, c] : counts) {
        mn = std::min(mn, c);
        mx = std::max(mx, c);
    }
    if (counts.empty()) mn = 0;

    bool cover = rep.checked_t_subspaces == expected;
    bool flat = !counts.empty() && Int(mn) == p.lambda() && Int(mx) == p.lambda();
    rep.ok = cover && flat;

    if (!cover) {
        mn = 0; // some t-subspace has count zero
        if (expected <= (Int(1) << 22)) {
            SubspaceEnumerator en(p.v(), p.t(), d.field());
            Subspace t;
            while (en.next(t))
                if (!counts.count(t)) { rep.first_violation = {t, 0}; break; }
        }
    } else if (!flat) {
        std::optional<Subspace> worst;
        for (const auto& [key, c] : counts)
            if (Int(c) != p.lambda() && (!worst || key < *worst)) worst = key;
        rep.first_violation = {*worst, counts[*worst]};
    }
    rep.min_count = counts.empty() ? 0 : mn;
    rep.max_count = mx;
    d.set_state(rep.ok ? VerifyState::verified : VerifyState::failed);
    return rep;
}

/// All k-subspaces of GF(q)^v as a design with lambda = [v-t k-t]_q.
inline Design complete_design(unsigned t, unsigned v, unsigned k, const Field& f) {
    return Design(complete_params(t, v, k, f.q()), f, all_subspaces(v, k, f));
}

inline Subspace unit_subspace(unsigned v, unsigned q, unsigned idx) {
    std::vector<std::uint16_t> coords(v, 0);
    coords[idx] = 1;
    return Subspace::from_rref_unchecked(v, q, 1, std::move(coords));
}

// ---------------------------------------------------------------------------
// Derived / residual / dual / reduced
// ---------------------------------------------------------------------------

/// Blocks through the point u, factored by u, on fixed V/u coordinates.
inline Design derived(const Design& d, const Subspace& u) {
    const ParameterSet& p = d.params();
    if (u.dim() != 1) throw BadDim("derived: dim(u) must be 1");
    if (u.ambient() != p.v() || u.q() != p.q())
        throw AmbientMismatch("derived: u lives in the wrong space");
    ParameterSet dp = derived_params(p);
    QuotientMap qm(d.field(), u);
    std::vector<Subspace> blocks;
    for (const auto& b : d.blocks())
        if (contains(b, u, d.field())) blocks.push_back(qm.push(b));
    return Design(dp, d.field(), std::move(blocks));
}

/// Blocks inside the hyperplane h, written in the coordinates given by the
/// pivot columns of h's echelon basis.
inline Design residual(const Design& d, const Subspace& h) {
    const ParameterSet& p = d.params();
    if (h.dim() != p.v() - 1) throw BadDim("residual: h must be a hyperplane");
    if (h.ambient() != p.v() || h.q() != p.q())
        throw AmbientMismatch("residual: h lives in the wrong space");
    ParameterSet rp = residual_params(p);
    std::vector<unsigned> piv = h.pivots();
    std::vector<Subspace> blocks;
    for (const auto& b : d.blocks()) {
        if (!contains(h, b, d.field())) continue;
        std::vector<RowVec> rows;
        rows.reserve(b.dim());
        for (unsigned i = 0; i < b.dim(); ++i) {
            RowVec r(piv.size());
            for (std::size_t j = 0; j < piv.size(); ++j) r[j] = b.at(i, piv[j]);
            rows.push_back(std::move(r));
        }
        blocks.push_back(subspace_from_rows(rows, d.field()));
    }
    return Design(rp, d.field(), std::move(blocks));
}

/// Blockwise orthogonal complement under the standard dot product.
inline Design dual(const Design& d) {
    ParameterSet dp = dual_params(d.params());
    std::vector<Subspace> blocks;
    blocks.reserve(d.blocks().size());
    for (const auto& b : d.blocks()) blocks.push_back(orthogonal_complement(b, d.field()));
    return Design(dp, d.field(), std::move(blocks));
}

/// Same blocks read as a (t-1)-design.
inline Design reduce(const Design& d) {
    return Design(reduced_params(d.params()), d.field(), d.blocks());
}

// ---------------------------------------------------------------------------
// mu_i^j
// ---------------------------------------------------------------------------

/// #\{B : I <= B <= J\} for random I of dimension i inside random J of
/// codimension j.  All trials must agree and the common value must equal the
/// closed form reached by j residual and t-i-j reduced parameter steps.
inline Int mu_ij(const Design& d, unsigned i, unsigned j, unsigned trials,
                 std::uint64_t seed = 0x71db5eedULL) {
    const ParameterSet& p = d.params();
    if (i + j > p.t()) throw SOutOfRange("mu_ij needs i + j <= t");
    if (trials == 0) trials = 1;
    const Field& f = d.field();
    std::mt19937_64 rng(seed);

    std::optional<std::uint64_t> common;
    for (unsigned trial = 0; trial < trials; ++trial) {
        Subspace J = random_subspace(p.v(), p.v() - j, f, rng);
        Subspace I = random_subspace_of(J, i, f, rng);
        std::uint64_t cnt = 0;
        for (const auto& b : d.blocks())
            if (contains(b, I, f) && contains(J, b, f)) ++cnt;
        if (common && *common != cnt)
            throw InconsistentCounts("mu_" + std::to_string(i) + "^" + std::to_string(j) +
                                     " differs between trials: " + std::to_string(*common) +
                                     " vs " + std::to_string(cnt));
        common = cnt;
    }

    ParameterSet cur = p;
    for (unsigned r = 0; r < j; ++r) cur = residual_params(cur);
    for (unsigned r = 0; r < p.t() - i - j; ++r) cur = reduced_params(cur);
    if (Int(*common) != cur.lambda())
        throw InconsistentCounts("mu_" + std::to_string(i) + "^" + std::to_string(j) + " = " +
                                 std::to_string(*common) + " but parameter maps give " +
                                 cur.lambda().str());
    return cur.lambda();
}

// ---------------------------------------------------------------------------
// The combination construction
// ---------------------------------------------------------------------------

namespace detail {
/// phi^{-1}(bbar) under the drop-first-coordinate projection: prepend a zero
/// to every basis row and adjoin e_1.  The result is already in echelon form.
inline Subspace lift_through_first(const Subspace& bbar) {
    unsigned v = bbar.ambient() + 1, k = bbar.dim() + 1;
    std::vector<std::uint16_t> coords(std::size_t(k) * v, 0);
    coords[0] = 1;
    for (unsigned i = 0; i < bbar.dim(); ++i)
        for (unsigned j = 0; j < bbar.ambient(); ++j)
            coords[std::size_t(i + 1) * v + (j + 1)] = bbar.at(i, j);
    return Subspace::from_rref_unchecked(v, bbar.q(), k, std::move(coords));
}
} // namespace detail

/// Builds a design with the reduced parameters of `target` from a design with
/// its derived parameters and one with its residual parameters, both living on
/// GF(q)^(v-1).  The projection phi drops the first coordinate, so the fixed
/// 1-subspace is U = <e_1>: the lifted derived blocks all contain U, and each
/// residual block contributes the q^k complements of U inside its lift.
inline Design combine(const Design& der_d, const Design& res_d, const ParameterSet& target) {
    ParameterSet want_der = derived_params(target);
    ParameterSet want_res = residual_params(target);
    if (der_d.params() != want_der)
        throw ParamMismatch("derived ingredient is " + der_d.params().str() + ", expected " +
                            want_der.str());
    if (res_d.params() != want_res)
        throw ParamMismatch("residual ingredient is " + res_d.params().str() + ", expected " +
                            want_res.str());

    unsigned v = target.v(), k = target.k(), q = target.q();
    const Field& f = der_d.field();
    ParameterSet out_params = reduced_params(target);

    // lambda_Red = lambda (q^{v-t+1}-1)/(q^{k-t+1}-1)
    Rat lred = Rat(target.lambda() * (int_pow(q, v - target.t() + 1) - 1)) /
               Rat(int_pow(q, k - target.t() + 1) - 1);
    if (Rat(out_params.lambda()) != lred)
        throw InternalError("combine: lambda_Red formula disagrees with reduced parameters");

    std::vector<Subspace> blocks;
    for (const auto& bbar : der_d.blocks()) blocks.push_back(detail::lift_through_first(bbar));
    std::size_t b1 = blocks.size();

    Subspace u = unit_subspace(v, q, 0);
    Int per_block = int_pow(q, k);
    for (const auto& bbar : res_d.blocks()) {
        Subspace lifted = detail::lift_through_first(bbar); // dim k+1, contains u
        std::size_t before = blocks.size();
        for_each_complement(u, lifted, f, [&](const Subspace& kk) {
            if (kk.dim() != k) throw InternalError("combine: complement has wrong dimension");
            blocks.push_back(kk);
        });
        if (Int(blocks.size() - before) != per_block)
            throw InternalError("combine: complement count is not q^k");
    }

    Int expected = Int(b1) + per_block * Int(res_d.blocks().size());
    Design out(out_params, f, std::move(blocks)); // rejects any collision
    if (Int(out.blocks().size()) != expected)
        throw InternalError("combine: lifted block families are not disjoint");
    return out;
}

/// Consistency check on a combined design: among the blocks that
/// avoid u, any two distinct blocks with the same image modulo u must meet in
/// dimension >= k-1 (they are complements of u in a common (k+1)-space).
/// Returns whether any such colliding pair exists.
inline bool intersection_obstruction(const Design& d, const Subspace& u) {
    const ParameterSet& p = d.params();
    if (u.dim() != 1) throw BadDim("intersection_obstruction: dim(u) must be 1");
    if (u.ambient() != p.v() || u.q() != p.q())
        throw AmbientMismatch("intersection_obstruction: u lives in the wrong space");
    const Field& f = d.field();
    QuotientMap qm(f, u);
    std::unordered_map<Subspace, std::vector<std::size_t>, SubspaceHash> groups;
    for (std::size_t idx = 0; idx < d.blocks().size(); ++idx) {
        const Subspace& b = d.blocks()[idx];
        if (contains(b, u, f)) continue;
        groups[qm.push(sum(b, u, f))].push_back(idx);
    }
    bool any = false;
    for (const auto& [image, idxs] : groups) {
        if (idxs.size() < 2) continue;
        any = true;
        for (std::size_t a = 0; a < idxs.size(); ++a)
            for (std::size_t b = a + 1; b < idxs.size(); ++b) {
                unsigned dim =
                    intersection(d.blocks()[idxs[a]], d.blocks()[idxs[b]], f).dim();
                if (dim + 1 < p.k())
                    throw InternalError("blocks with a common image meet in dimension " +
                                        std::to_string(dim) + " < k-1");
            }
    }
    return any;
}

} // namespace qdesign
