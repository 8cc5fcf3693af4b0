#include <catch2/catch_amalgamated.hpp>

#include "qdesign/km.hpp"

using namespace qdesign;

namespace {

LargeSet parallelism(const Field& f2) {
    auto ls = ls_search(trivial_group(4, f2), 1, 2, 7);
    REQUIRE(ls.has_value());
    return *ls;
}

} // namespace

TEST_CASE("the complete design is a large set with N = 1") {
    Field f2(2);
    LargeSet ls = complete_large_set(2, 5, 3, f2);
    CHECK(ls.N() == 1);
    LsReport rep = verify_ls(ls);
    CHECK(rep.ok);
    CHECK(rep.disjoint);
    CHECK(rep.complete_cover);
    CHECK(rep.total_blocks == gauss(5, 3, 2));
}

TEST_CASE("member lambda is forced by N") {
    Field f2(2);
    Design d = complete_design(1, 4, 2, f2);
    // N = 1 with the complete member is fine
    CHECK_NOTHROW(LargeSet(d.params(), {d}));
    // N = 2 copies of the complete design: 2 * lambda != [3 1]_2
    CHECK_THROWS_AS(LargeSet(d.params(), {d, d}), NMismatch);
}

TEST_CASE("moving a block between members breaks the partition") {
    Field f2(2);
    LargeSet ls = parallelism(f2);

    std::vector<Design> members = ls.members();
    std::vector<Subspace> a = members[0].blocks();
    std::vector<Subspace> b = members[1].blocks();
    b.back() = a.back(); // now one block appears twice, one line is uncovered
    members[1] = Design(members[1].params(), f2, std::move(b));
    LargeSet broken(ls.member_params(), std::move(members));
    LsReport rep = verify_ls(broken);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.disjoint);
}

TEST_CASE("dual large set") {
    Field f2(2);
    LargeSet ls = parallelism(f2);
    LargeSet dls = dual_ls(ls);
    CHECK(dls.member_params().str() == "1-(4,2,1)_2"); // self-dual parameters (v-k = k)
    CHECK(verify_ls(dls).ok);

    // blockwise involution
    LargeSet back = dual_ls(dls);
    for (unsigned i = 0; i < ls.N(); ++i)
        CHECK(back.members()[i].blocks() == ls.members()[i].blocks());

    // N = 1: the dual of the complete large set is complete on (v-k)-subspaces
    LargeSet c = complete_large_set(1, 5, 2, f2);
    LargeSet dc = dual_ls(c);
    CHECK(dc.member_params().str() == "1-(5,3,35)_2");
    CHECK(verify_ls(dc).ok);
}

TEST_CASE("derived and residual large sets") {
    Field f2(2);
    LargeSet ls = parallelism(f2);

    // the 7 points of the quotient plane split one per member
    LargeSet dls = derived_ls(ls, unit_subspace(4, 2, 0));
    CHECK(dls.member_params().str() == "0-(3,1,1)_2");
    CHECK(verify_ls(dls).ok);
    for (const auto& m : dls.members()) CHECK(m.blocks().size() == 1);

    LargeSet rls = residual_ls(ls, orthogonal_complement(unit_subspace(4, 2, 0), f2));
    CHECK(rls.member_params().str() == "0-(3,2,1)_2");
    CHECK(verify_ls(rls).ok);

    // partition property preserved for every choice of the point
    for_each_subspace(4, 1, f2, [&](const Subspace& u) {
        LargeSet der = derived_ls(ls, u);
        REQUIRE(verify_ls(der).ok);
    });

    // residual of the N = 1 complete large set stays complete
    LargeSet c = complete_large_set(1, 5, 3, f2);
    LargeSet rc = residual_ls(c, orthogonal_complement(unit_subspace(5, 2, 0), f2));
    CHECK(verify_ls(rc).ok);
}

TEST_CASE("combine_ls on complete ingredients") {
    Field f2(2);
    LargeSet der = complete_large_set(1, 5, 2, f2);
    LargeSet res = complete_large_set(1, 5, 3, f2);
    ParameterSet target(2, 6, 3, 15, 2);
    LargeSet out = combine_ls(der, res, target);
    CHECK(out.N() == 1);
    CHECK(out.member_params().str() == "1-(6,3,155)_2");
    CHECK(verify_ls(out).ok);
}

TEST_CASE("combine_ls pairing can be permuted") {
    Field f2(2);
    // derived and residual large sets of the parallelism are combinable:
    // LS[7](0,1,3) and LS[7](0,2,3) -> LS[7](0,2,4)
    LargeSet ls = parallelism(f2);
    Subspace u = unit_subspace(4, 2, 0);
    LargeSet der = derived_ls(ls, u);
    LargeSet res = residual_ls(ls, orthogonal_complement(u, f2));
    ParameterSet target(1, 4, 2, 1, 2);
    REQUIRE(derived_params(target) == der.member_params());
    REQUIRE(residual_params(target) == res.member_params());

    LargeSet out = combine_ls(der, res, target);
    CHECK(out.member_params().str() == "0-(4,2,5)_2");
    CHECK(verify_ls(out).ok);

    // any pairing works: each pair still forms a design and the union of all
    // blocks is unchanged
    std::vector<unsigned> perm = {3, 0, 6, 1, 5, 2, 4};
    LargeSet out2 = combine_ls(der, res, target, &perm);
    CHECK(verify_ls(out2).ok);

    std::vector<unsigned> bad = {0, 0, 1, 2, 3, 4, 5};
    CHECK_THROWS_AS(combine_ls(der, res, target, &bad), NMismatch);
}

TEST_CASE("combine_ls rejects mismatched N") {
    Field f2(2);
    LargeSet der = complete_large_set(1, 5, 2, f2);
    LargeSet ls7 = parallelism(f2);
    CHECK_THROWS_AS(combine_ls(der, ls7, ParameterSet(2, 6, 3, 15, 2)), NMismatch);
}
