#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qdesign/params.hpp"

using namespace qdesign;

TEST_CASE("gauss values") {
    CHECK(gauss(4, 2, 2) == 35);
    CHECK(gauss(3, 4, 2) == 0); // k > v
    CHECK(gauss(5, -1, 2) == 0);
    CHECK(gauss(6, 0, 3) == 1);
    CHECK(gauss(7, 3, 2) == 11811);
    CHECK(gauss(13, 2, 2) == 11180715);
    CHECK(gauss(8, 4, 2) == 200787);
}

TEST_CASE("gauss symmetry and product identity") {
    for (unsigned q : {2u, 3u}) {
        for (long n = 0; n <= 8; ++n)
            for (long k = 0; k <= n; ++k)
                REQUIRE(gauss(n, k, q) == gauss(n, n - k, q));
    }
    for (unsigned q : {2u, 3u, 4u}) {
        for (long n = 0; n <= 10; ++n)
            for (long h = 0; h <= n; ++h)
                for (long k = 0; k <= n - h; ++k)
                    REQUIRE(gauss(n, h, q) * gauss(n - h, k, q) ==
                            gauss(n, k, q) * gauss(n - k, h, q));
    }
}

TEST_CASE("q-Pascal identities") {
    for (unsigned q : {2u, 3u, 4u}) {
        for (long n = 1; n <= 12; ++n)
            for (long k = 0; k <= n; ++k) {
                Int lhs = gauss(n, k, q);
                REQUIRE(lhs == gauss(n - 1, k - 1, q) + int_pow(q, (unsigned)k) * gauss(n - 1, k, q));
                REQUIRE(lhs == int_pow(q, (unsigned)(n - k)) * gauss(n - 1, k - 1, q) +
                                   gauss(n - 1, k, q));
            }
    }
}

TEST_CASE("parameter set validation") {
    CHECK_NOTHROW(ParameterSet(2, 7, 3, 1, 2));
    CHECK_THROWS_AS(ParameterSet(4, 7, 3, 1, 2), InvalidParameterSet); // t > k
    CHECK_THROWS_AS(ParameterSet(2, 3, 4, 1, 2), InvalidParameterSet); // k > v
    CHECK_THROWS_AS(ParameterSet(2, 7, 3, 0, 2), InvalidParameterSet); // lambda 0
    CHECK_THROWS_AS(ParameterSet(2, 7, 3, 32, 2), InvalidParameterSet); // above complete (31)
    CHECK_THROWS_AS(ParameterSet(2, 7, 3, 1, 6), InvalidParameterSet); // q not a prime power
    CHECK_NOTHROW(ParameterSet(2, 7, 3, 31, 2)); // the complete design itself
}

TEST_CASE("parameter set parsing and printing") {
    ParameterSet p = parse_param_set("3-(8,4,3)_2");
    CHECK(p.t() == 3);
    CHECK(p.v() == 8);
    CHECK(p.k() == 4);
    CHECK(p.lambda() == 3);
    CHECK(p.q() == 2);
    CHECK(p.str() == "3-(8,4,3)_2");
    CHECK(parse_param_set(" 2-(13, 3, 1)_2 ").str() == "2-(13,3,1)_2");
    CHECK_THROWS_AS(parse_param_set("junk"), FormatError);
}

TEST_CASE("lambda_s") {
    ParameterSet p(2, 13, 3, 1, 2);
    CHECK(lambda_s(p, 0) == Rat(1597245));
    CHECK(lambda_s(p, 2) == Rat(p.lambda()));

    ParameterSet w(3, 22, 6, 1, 2);
    CHECK_FALSE(is_integer(lambda_s(w, 0)));

    CHECK_THROWS_AS(lambda_s(p, 3), SOutOfRange);
}

TEST_CASE("admissibility verdicts") {
    CHECK(is_admissible(ParameterSet(2, 7, 3, 1, 2)).admissible);
    CHECK(is_admissible(ParameterSet(5, 12, 6, 1, 2)).admissible);

    auto r1 = is_admissible(ParameterSet(3, 22, 6, 1, 2));
    CHECK_FALSE(r1.admissible);
    REQUIRE(r1.failing_s.has_value());
    CHECK(*r1.failing_s == 0);

    CHECK_FALSE(is_admissible(ParameterSet(5, 24, 8, 1, 2)).admissible);
}

TEST_CASE("parameter maps") {
    ParameterSet p841(3, 8, 4, 1, 2);
    CHECK(residual_params(p841).str() == "2-(7,4,5)_2");
    CHECK(derived_params(p841).str() == "2-(7,3,1)_2");

    ParameterSet p843(3, 8, 4, 3, 2);
    CHECK(reduced_params(p843).str() == "2-(8,4,63)_2");
    CHECK(residual_params(p843).str() == "2-(7,4,15)_2");
    CHECK(derived_params(p843).str() == "2-(7,3,3)_2");

    CHECK_THROWS_AS(derived_params(ParameterSet(0, 8, 4, 1, 2)), TZero);
    CHECK_THROWS_AS(residual_params(ParameterSet(2, 8, 4, 1, 2)), NonIntegralMu);
    // lambda_1 = [7 1]_2 / [2 1]_2 = 127/3 is not integral
    CHECK_THROWS_AS(reduced_params(ParameterSet(2, 8, 3, 1, 2)), NonIntegralLambda);
}

TEST_CASE("dual parameters") {
    CHECK(dual_params(ParameterSet(2, 7, 3, 1, 2)).str() == "2-(7,4,5)_2");
    CHECK(dual_params(ParameterSet(2, 7, 3, 3, 2)).str() == "2-(7,4,15)_2");
    // 1 * [5 2]_2 = 155 is not divisible by [3 2]_2 = 7
    CHECK_THROWS_AS(dual_params(ParameterSet(2, 8, 3, 1, 2)), NonIntegralDual);
    // v - k < t leaves no room for the dual block dimension
    CHECK_THROWS_AS(dual_params(ParameterSet(3, 5, 4, 1, 2)), NonIntegralDual);

    // involution on every admissible set with t <= 3, v <= 8, q = 2, t <= v-k
    for (unsigned t = 0; t <= 3; ++t)
        for (unsigned v = t; v <= 8; ++v)
            for (unsigned k = t; k <= v; ++k) {
                if (v - k < t) continue;
                Int cap = gauss(v - t, k - t, 2);
                for (Int l = 1; l <= cap; ++l) {
                    ParameterSet p(t, v, k, l, 2);
                    if (!is_admissible(p).admissible) continue;
                    ParameterSet d = dual_params(p);
                    REQUIRE(dual_params(d) == p);
                }
            }
}

TEST_CASE("lambda delta rho identity") {
    CHECK(check_lambda_identity(ParameterSet(3, 8, 4, 1, 2), 1));

    for (Int l = 1; l <= 10; ++l)
        for (unsigned s = 0; s <= 1; ++s)
            REQUIRE(check_lambda_identity(ParameterSet(2, 6, 3, l, 3), s));

    std::mt19937_64 rng(42);
    const unsigned qs[] = {2, 3, 4, 5};
    for (int trial = 0; trial < 500; ++trial) {
        unsigned q = qs[rng() % 4];
        unsigned t = 1 + rng() % 5;
        unsigned v = t + 1 + rng() % (30 - t);
        unsigned k = t + rng() % (v - t); // t <= k < v
        Int cap = gauss(v - t, k - t, q);
        Int l = 1 + Int(rng() % 1000000) % cap;
        ParameterSet p(t, v, k, l, q);
        for (unsigned s = 0; s < t; ++s) REQUIRE(check_lambda_identity(p, s));
    }
}

TEST_CASE("admissibility propagates to derived, residual, reduced") {
    for (unsigned q : {2u, 3u}) {
        for (unsigned t = 1; t <= 3; ++t)
            for (unsigned v = t + 1; v <= 8; ++v)
                for (unsigned k = t; k < v; ++k) {
                    Int cap = gauss(v - t, k - t, q);
                    for (Int l = 1; l <= cap && l <= 40; ++l) {
                        ParameterSet p(t, v, k, l, q);
                        if (!is_admissible(p).admissible) continue;
                        REQUIRE(is_admissible(derived_params(p)).admissible);
                        REQUIRE(is_admissible(residual_params(p)).admissible);
                        REQUIRE(is_admissible(reduced_params(p)).admissible);
                        // block counts of the combination: every residual
                        // block contributes q^k complements
                        REQUIRE(lambda_s(reduced_params(p), 0) ==
                                lambda_s(derived_params(p), 0) +
                                    Rat(int_pow(q, k)) * lambda_s(residual_params(p), 0));
                    }
                }
    }
}

TEST_CASE("admissible derived and residual force admissibility") {
    // converse direction on parameter sets that need not be admissible a priori
    for (unsigned q : {2u, 3u}) {
        for (unsigned t = 1; t <= 3; ++t)
            for (unsigned v = t + 1; v <= 8; ++v)
                for (unsigned k = t; k < v; ++k) {
                    Int cap = gauss(v - t, k - t, q);
                    for (Int l = 1; l <= cap && l <= 40; ++l) {
                        ParameterSet p(t, v, k, l, q);
                        bool der_ok = is_admissible(derived_params(p)).admissible;
                        bool res_ok = false;
                        try {
                            res_ok = is_admissible(residual_params(p)).admissible;
                        } catch (const NonIntegralMu&) {
                            res_ok = false;
                        }
                        if (der_ok && res_ok) REQUIRE(is_admissible(p).admissible);
                    }
                }
    }
}
