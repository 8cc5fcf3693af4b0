#pragma once

#include <unordered_set>
#include <utility>
#include <vector>

#include "qdesign/designs.hpp"

namespace qdesign {

/// An ordered list of designs with identical parameters whose block sets are
/// claimed to partition the full Grassmannian [V k]_q.  The member lambda is
/// forced: N * lambda = [v-t k-t]_q.
class LargeSet {
public:
    LargeSet(ParameterSet member_params, std::vector<Design> members)
        : params_(std::move(member_params)), members_(std::move(members)) {
        if (members_.empty()) throw NMismatch("a large set needs at least one member");
        Int need = gauss(params_.v() - params_.t(), params_.k() - params_.t(), params_.q());
        if (params_.lambda() * Int(members_.size()) != need)
            throw NMismatch("N * lambda = " + (params_.lambda() * Int(members_.size())).str() +
                            " but the complete design has lambda " + need.str());
        for (const auto& d : members_)
            if (d.params() != params_)
                throw ParamMismatch("member has parameters " + d.params().str() + ", expected " +
                                    params_.str());
    }

    unsigned N() const { return static_cast<unsigned>(members_.size()); }
    const ParameterSet& member_params() const { return params_; }
    const std::vector<Design>& members() const { return members_; }
    std::vector<Design>& members() { return members_; }
    const Field& field() const { return members_.front().field(); }

private:
    ParameterSet params_;
    std::vector<Design> members_;
};

/// N = 1: the complete design alone.
inline LargeSet complete_large_set(unsigned t, unsigned v, unsigned k, const Field& f) {
    Design d = complete_design(t, v, k, f);
    ParameterSet p = d.params();
    std::vector<Design> ms;
    ms.push_back(std::move(d));
    return LargeSet(std::move(p), std::move(ms));
}

struct LsReport {
    bool ok = false;
    bool disjoint = false;
    bool complete_cover = false; // union is all of [V k]_q
    Int total_blocks = 0;
    std::vector<VerifyReport> member_reports;
};

/// Partition check plus full verification of every member.
inline LsReport verify_ls(LargeSet& ls, unsigned threads = 0) {
    LsReport rep;
    std::unordered_set<Subspace, SubspaceHash> seen;
    rep.disjoint = true;
    for (const auto& d : ls.members())
        for (const auto& b : d.blocks()) {
            if (!seen.insert(b).second) rep.disjoint = false;
            rep.total_blocks += 1;
        }
    const ParameterSet& p = ls.member_params();
    rep.complete_cover =
        rep.disjoint && rep.total_blocks == gauss(p.v(), p.k(), p.q());
    bool members_ok = true;
    for (auto& d : ls.members()) {
        rep.member_reports.push_back(verify(d, threads));
        members_ok = members_ok && rep.member_reports.back().ok;
    }
    rep.ok = rep.disjoint && rep.complete_cover && members_ok;
    return rep;
}

inline LargeSet dual_ls(const LargeSet& ls) {
    std::vector<Design> ms;
    ms.reserve(ls.N());
    for (const auto& d : ls.members()) ms.push_back(dual(d));
    return LargeSet(dual_params(ls.member_params()), std::move(ms));
}

inline LargeSet derived_ls(const LargeSet& ls, const Subspace& u) {
    std::vector<Design> ms;
    ms.reserve(ls.N());
    for (const auto& d : ls.members()) ms.push_back(derived(d, u));
    return LargeSet(derived_params(ls.member_params()), std::move(ms));
}

inline LargeSet residual_ls(const LargeSet& ls, const Subspace& h) {
    std::vector<Design> ms;
    ms.reserve(ls.N());
    for (const auto& d : ls.members()) ms.push_back(residual(d, h));
    return LargeSet(residual_params(ls.member_params()), std::move(ms));
}

/// Combines two large sets member by member (pairing by index, or by the given
/// permutation of the residual side) and checks that the results partition
/// [V k]_q.  `target` is the parameter set whose derived/residual parameter
/// sets the ingredients carry.
inline LargeSet combine_ls(const LargeSet& der, const LargeSet& res, const ParameterSet& target,
                           const std::vector<unsigned>* perm = nullptr) {
    if (der.N() != res.N())
        throw NMismatch("large sets have different N: " + std::to_string(der.N()) + " vs " +
                        std::to_string(res.N()));
    std::vector<unsigned> idx(der.N());
    for (unsigned i = 0; i < der.N(); ++i) idx[i] = i;
    if (perm) {
        if (perm->size() != der.N()) throw NMismatch("permutation length != N");
        idx = *perm;
        std::vector<bool> hit(der.N(), false);
        for (unsigned i : idx) {
            if (i >= der.N() || hit[i]) throw NMismatch("not a permutation of 0..N-1");
            hit[i] = true;
        }
    }
    std::vector<Design> ms;
    ms.reserve(der.N());
    for (unsigned i = 0; i < der.N(); ++i)
        ms.push_back(combine(der.members()[i], res.members()[idx[i]], target));
    LargeSet out(reduced_params(target), std::move(ms));
    // partition of [V k]_q
    std::unordered_set<Subspace, SubspaceHash> seen;
    for (const auto& d : out.members())
        for (const auto& b : d.blocks())
            if (!seen.insert(b).second)
                throw InternalError("combine_ls: members are not disjoint");
    if (Int(seen.size()) != gauss(target.v(), target.k(), target.q()))
        throw InternalError("combine_ls: union does not cover [V k]_q");
    return out;
}

} // namespace qdesign
