#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include "qdesign/gfq.hpp"
#include "qdesign/params.hpp"

using namespace qdesign;

namespace {

RowVec rv(std::initializer_list<int> xs) {
    RowVec r;
    for (int x : xs) r.push_back(static_cast<std::uint16_t>(x));
    return r;
}

Subspace S(const Field& f, std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<RowVec> rs;
    for (auto r : rows) rs.push_back(rv(r));
    return subspace_from_rows(rs, f);
}

// every vector of a subspace, as a set (brute-force oracle)
std::set<RowVec> vectors_of(const Subspace& s, const Field& f) {
    std::set<RowVec> out;
    unsigned k = s.dim(), v = s.ambient();
    std::vector<unsigned> c(k, 0);
    for (;;) {
        RowVec x(v, 0);
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < v && c[i]; ++j)
                if (s.at(i, j))
                    x[j] = static_cast<std::uint16_t>(f.add(x[j], f.mul(c[i], s.at(i, j))));
        out.insert(x);
        unsigned i = 0;
        while (i < k && ++c[i] == f.q()) c[i++] = 0;
        if (i == k) break;
    }
    return out;
}

} // namespace

TEST_CASE("field construction") {
    Field f2(2);
    CHECK(f2.p() == 2);
    CHECK(f2.e() == 1);

    Field f4(4);
    CHECK(f4.p() == 2);
    CHECK(f4.e() == 2);
    // x * x must not vanish in GF(4)
    CHECK(f4.mul(2, 2) != 0);

    CHECK_THROWS_AS(Field(6), NotPrimePower);
    CHECK_THROWS_AS(Field(0), NotPrimePower);
    CHECK_THROWS_AS(Field(1), NotPrimePower);
    CHECK_THROWS_AS(Field(12), NotPrimePower);
    CHECK_THROWS_AS(Field(177147), TooLarge); // 3^11
}

TEST_CASE("field axioms hold exhaustively for small q") {
    for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 13u, 16u}) {
        Field f(q);
        for (unsigned a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a) CHECK(f.mul(a, f.inv(a)) == 1);
            for (unsigned b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                for (unsigned c = 0; c < q; ++c) {
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("field tables work at the top of the supported range") {
    Field f(256);
    CHECK(f.e() == 8);
    unsigned a = 37, b = 211;
    CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.mul(f.mul(a, b), f.inv(b)) == a);

    Field big(65536); // 2^16 is the last admitted order
    CHECK(big.e() == 16);
    unsigned c = 54321;
    CHECK(big.mul(c, big.inv(c)) == 1);
}

TEST_CASE("rref examples") {
    Field f2(2);
    auto [s, rank] = rref({rv({1, 1, 0}), rv({0, 1, 1})}, f2);
    CHECK(rank == 2);
    CHECK(s.key() == "101;011");

    auto [z, zr] = rref({rv({0, 0, 0})}, f2);
    CHECK(zr == 0);
    CHECK(z.is_zero());

    auto [d, dr] = rref({rv({1, 0}), rv({1, 0})}, f2);
    CHECK(dr == 1);
    CHECK(d.key() == "10");

    CHECK_THROWS_AS(rref({rv({1, 0}), rv({1, 0, 1})}, f2), DimensionMismatch);
}

TEST_CASE("rref is canonical: generator order and repetition do not matter") {
    std::mt19937_64 rng(7);
    for (unsigned q : {2u, 3u, 4u}) {
        Field f(q);
        std::uniform_int_distribution<unsigned> coord(0, q - 1);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<RowVec> rows(3, RowVec(6));
            for (auto& r : rows)
                for (auto& x : r) x = static_cast<std::uint16_t>(coord(rng));
            Subspace a = subspace_from_rows(rows, f);
            std::shuffle(rows.begin(), rows.end(), rng);
            rows.push_back(rows.front()); // duplicate a generator
            Subspace b = subspace_from_rows(rows, f);
            REQUIRE(a == b);
            REQUIRE(subspace_from_rows(a.rows(), f) == a); // idempotent
        }
    }
}

TEST_CASE("containment") {
    Field f2(2);
    Subspace x = S(f2, {{1, 0, 1}, {0, 1, 1}});
    CHECK(contains(x, x, f2));
    CHECK(contains(full_space(3, 2), x, f2));
    Subspace e1 = S(f2, {{1, 0, 0}});
    Subspace e2 = S(f2, {{0, 1, 0}});
    CHECK_FALSE(contains(e1, e2, f2));
    CHECK(contains(x, zero_subspace(3, 2), f2));

    Field f3(3);
    CHECK_THROWS_AS(contains(x, S(f3, {{1, 0, 0}}), f3), AmbientMismatch);
}

TEST_CASE("sum and intersection") {
    Field f2(2);
    Subspace x = S(f2, {{1, 0, 1}, {0, 1, 1}});
    CHECK(sum(x, zero_subspace(3, 2), f2) == x);

    Subspace l1 = S(f2, {{1, 0}});
    Subspace l2 = S(f2, {{0, 1}});
    CHECK(sum(l1, l2, f2) == full_space(2, 2));
    CHECK(intersection(l1, l2, f2).is_zero());
}

TEST_CASE("modular dimension law and brute-force meet") {
    std::mt19937_64 rng(11);
    for (unsigned q : {2u, 3u, 4u}) {
        Field f(q);
        for (int trial = 0; trial < 334; ++trial) {
            Subspace a = random_subspace(5, trial % 5, f, rng);
            Subspace b = random_subspace(5, (trial / 5) % 5, f, rng);
            Subspace s = sum(a, b, f);
            Subspace m = intersection(a, b, f);
            REQUIRE(s.dim() + m.dim() == a.dim() + b.dim());
            REQUIRE(contains(a, m, f));
            REQUIRE(contains(b, m, f));
            REQUIRE(contains(s, a, f));
            REQUIRE(contains(s, b, f));
        }
    }
    // vector-set oracle over GF(2)^5
    Field f2(2);
    for (int trial = 0; trial < 50; ++trial) {
        Subspace a = random_subspace(5, 3, f2, rng);
        Subspace b = random_subspace(5, 2 + trial % 2, f2, rng);
        auto va = vectors_of(a, f2);
        auto vb = vectors_of(b, f2);
        std::set<RowVec> meet;
        std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(),
                              std::inserter(meet, meet.begin()));
        REQUIRE(meet == vectors_of(intersection(a, b, f2), f2));
    }
}

TEST_CASE("enumeration counts and canonical form") {
    Field f2(2);
    CHECK(all_subspaces(4, 2, f2).size() == 35);

    auto zero_only = all_subspaces(3, 0, f2);
    REQUIRE(zero_only.size() == 1);
    CHECK(zero_only[0].is_zero());

    std::size_t n73 = 0;
    for_each_subspace(7, 3, f2, [&](const Subspace&) { ++n73; });
    CHECK(n73 == 11811);

    for (unsigned q : {2u, 3u}) {
        Field f(q);
        for (unsigned v = 0; v <= 6; ++v)
            for (unsigned k = 0; k <= v; ++k) {
                std::unordered_set<Subspace, SubspaceHash> seen;
                for_each_subspace(v, k, f, [&](const Subspace& s) {
                    REQUIRE(s.dim() == k);
                    REQUIRE(subspace_from_rows(s.rows(), f, v) == s); // already canonical
                    seen.insert(s);
                });
                REQUIRE(Int(seen.size()) == gauss(v, k, q));
            }
    }
}

TEST_CASE("complements") {
    Field f2(2);
    Subspace u = S(f2, {{1, 0, 0, 0}});
    CHECK(complements(u, full_space(4, 2), f2).size() == 8); // q^(1*3)

    Subspace w = S(f2, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    auto self = complements(w, w, f2);
    REQUIRE(self.size() == 1);
    CHECK(self[0].is_zero());

    // u 1-dim inside a 5-dim w: q^(1*4) = 16, cross-checked by filtering
    // the full enumeration of 4-subspaces
    Subspace u5 = S(f2, {{1, 0, 0, 0, 0}});
    Subspace w5 = full_space(5, 2);
    auto ks = complements(u5, w5, f2);
    CHECK(ks.size() == 16);
    std::vector<Subspace> filtered;
    for_each_subspace(5, 4, f2, [&](const Subspace& k) {
        if (intersection(k, u5, f2).is_zero() && sum(k, u5, f2) == w5) filtered.push_back(k);
    });
    std::sort(ks.begin(), ks.end());
    std::sort(filtered.begin(), filtered.end());
    CHECK(ks == filtered);

    CHECK_THROWS_AS(complements(S(f2, {{0, 0, 1, 0}}), w, f2), NotContained);
}

TEST_CASE("complement count law, exhaustively for small ambients") {
    for (unsigned q : {2u, 3u}) {
        Field f(q);
        for (unsigned wd = 0; wd <= 3; ++wd) {
            for_each_subspace(4, wd, f, [&](const Subspace& w) {
                for (unsigned ud = 0; ud <= wd; ++ud) {
                    std::size_t expect = 1;
                    for (unsigned i = 0; i < ud * (wd - ud); ++i) expect *= q;
                    // check a couple of u's inside w
                    unsigned tested = 0;
                    for_each_subspace_of(w, ud, f, [&](const Subspace& u) {
                        if (tested++ >= 2) return;
                        std::unordered_set<Subspace, SubspaceHash> ks;
                        for_each_complement(u, w, f, [&](const Subspace& k) {
                            REQUIRE(intersection(k, u, f).is_zero());
                            REQUIRE(sum(k, u, f) == w);
                            ks.insert(k);
                        });
                        REQUIRE(ks.size() == expect);
                    });
                }
            });
        }
    }
}

TEST_CASE("quotient map") {
    Field f2(2);
    Subspace u = S(f2, {{0, 1, 1, 0, 0, 0}});
    QuotientMap qm(f2, u);
    CHECK(qm.quotient_dim() == 5);
    CHECK(qm.push(u).is_zero());
    CHECK(qm.push(full_space(6, 2)) == full_space(5, 2));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Subspace raw = random_subspace(6, 1 + trial % 5, f2, rng);
        Subspace s = sum(raw, u, f2);
        Subspace img = qm.push(s);
        REQUIRE(img.dim() == s.dim() - 1);
        REQUIRE(qm.pull(img) == s);
    }
    for (int trial = 0; trial < 50; ++trial) {
        Subspace sbar = random_subspace(5, trial % 6, f2, rng);
        REQUIRE(qm.push(qm.pull(sbar)) == sbar);
    }

    Subspace avoid = S(f2, {{1, 0, 0, 0, 0, 0}});
    CHECK_THROWS_AS(qm.push(avoid), NotContained);
}

TEST_CASE("orthogonal complement") {
    Field f2(2);
    CHECK(orthogonal_complement(zero_subspace(4, 2), f2) == full_space(4, 2));
    CHECK(orthogonal_complement(full_space(4, 2), f2).is_zero());
    CHECK(orthogonal_complement(S(f2, {{1, 0}}), f2) == S(f2, {{0, 1}}));

    // involution on every 2-subspace of GF(2)^4
    for_each_subspace(4, 2, f2, [&](const Subspace& s) {
        Subspace p = orthogonal_complement(s, f2);
        REQUIRE(p.dim() == 2);
        REQUIRE(orthogonal_complement(p, f2) == s);
    });

    // inclusion-reversing on all pairs in GF(2)^4
    std::vector<Subspace> all;
    for (unsigned k = 0; k <= 4; ++k)
        for (const auto& s : all_subspaces(4, k, f2)) all.push_back(s);
    for (const auto& a : all)
        for (const auto& b : all)
            REQUIRE(contains(a, b, f2) ==
                    contains(orthogonal_complement(b, f2), orthogonal_complement(a, f2), f2));
}

TEST_CASE("text encoding") {
    Field f2(2);
    Subspace s = S(f2, {{1, 0, 1}, {0, 1, 1}});
    CHECK(s.key() == "101;011");
    CHECK(decode_subspace("101;011", 3, f2) == s);
    CHECK(decode_subspace("", 3, f2).is_zero());

    CHECK_THROWS_AS(decode_subspace("110;011", 3, f2), FormatError); // not RREF
    CHECK_THROWS_AS(decode_subspace("10;011", 3, f2), FormatError);  // ragged
    CHECK_THROWS_AS(decode_subspace("121", 3, f2), FormatError);     // digit >= q

    Field f3(3);
    Subspace t = S(f3, {{1, 2, 0}, {0, 0, 1}});
    CHECK(decode_subspace(t.key(), 3, f3) == t);
}
