#include <random>
#include <set>

#include "deacon/bounds.hpp"
#include "doctest.h"

using namespace deacon;

TEST_CASE("ratio_phi_over_s2") {
    CHECK(ratio_phi_over_s2(factorize(15)) == make_rational(8, 3));
    CHECK(ratio_phi_over_s2(factorize(3)) == make_rational(2, 1));
    // 3*5*7: (2/1)(4/3)(6/5) = 48/15 = 16/5
    CHECK(ratio_phi_over_s2(factorize(105)) == make_rational(16, 5));
    CHECK_THROWS_AS(ratio_phi_over_s2(factorize(12)), std::invalid_argument);
    CHECK_THROWS_AS(ratio_phi_over_s2(factorize(9)), std::invalid_argument);

    // always equals phi/s2 exactly on valid input
    for (u64 n = 3; n <= 2000; n += 2) {
        Factorization f = factorize(n);
        if (!is_squarefree(f)) continue;
        CHECK(ratio_phi_over_s2(f) ==
              make_rational(to_big(euler_phi(f)), to_big(schemmel_s2(f))));
    }
}

TEST_CASE("ratio_exceeds is strict") {
    CHECK(ratio_exceeds(factorize(15), 2));        // 8/3 > 2
    CHECK_FALSE(ratio_exceeds(factorize(15), 3));  // 8/3 < 3
    CHECK_FALSE(ratio_exceeds(factorize(3), 2));   // exactly 2: equality fails
}

TEST_CASE("q_product exact values") {
    CHECK(q_product(1) == make_rational(2, 1));
    CHECK(q_product(3) == make_rational(16, 5));
    CHECK(q_product(6) == make_rational(2048, 495));
    CHECK_THROWS_AS(q_product(0), std::invalid_argument);

    for (u32 r = 3; r <= 6; ++r) CHECK(q_product(r) < 5);

    // strictly increasing in r
    for (u32 r = 1; r < 20; ++r) CHECK(q_product(r) < q_product(r + 1));
}

TEST_CASE("skip3_product exact values") {
    CHECK(skip3_product(1) == make_rational(4, 3));
    CHECK(skip3_product(2) == make_rational(8, 5));
    CHECK(skip3_product(6) == make_rational(2048, 935));
    CHECK(skip3_product(6) < 3);
    for (u32 r = 1; r <= 20; ++r) CHECK(skip3_product(r) < q_product(r));

    // the default multiplier candidates {3,5,7} rest on these two facts:
    // any multiplier sits strictly below Q_K, and Q_20 is still below 8
    CHECK(q_product(20) < 8);
    CHECK(skip3_product(20) < 4);
}

TEST_CASE("rationals stay reduced through arithmetic") {
    CHECK(is_reduced(q_product(6)));
    CHECK(is_reduced(skip3_product(6)));
    CHECK(is_reduced(ratio_phi_over_s2(factorize(105))));
    Rational q = q_product(6) * skip3_product(6) - make_rational(1, 495);
    CHECK(is_reduced(q));
}

TEST_CASE("omega2_scan finds nothing") {
    CHECK(omega2_scan(100).empty());
    CHECK(omega2_scan(5).empty());  // single pair (3,5): M would be 7/3
    CHECK(omega2_scan(2000).empty());
    CHECK_THROWS_AS(omega2_scan(4), std::invalid_argument);
}

TEST_CASE("mod3_obstruction_check") {
    CHECK(mod3_obstruction_check({5, 7}));  // 4*6 = 24 = 0 mod 3
    CHECK(mod3_obstruction_check({7, 13}));
    CHECK(mod3_obstruction_check({7}));
    CHECK(mod3_obstruction_check({5, 7, 11, 13, 17, 19}));
    CHECK_THROWS_AS(mod3_obstruction_check({3, 5}), std::invalid_argument);
    CHECK_THROWS_AS(mod3_obstruction_check({2, 5}), std::invalid_argument);
    CHECK_THROWS_AS(mod3_obstruction_check({5, 5}), std::invalid_argument);
    CHECK_THROWS_AS(mod3_obstruction_check({}), std::invalid_argument);
}

TEST_CASE("nielsen_precondition") {
    CHECK(nielsen_precondition({2}, 1, 2));     // 1/2 <= 1/2 < 1
    CHECK(nielsen_precondition({2, 3}, 1, 3));  // 1/3 <= 1/3 < 1/2
    CHECK_FALSE(nielsen_precondition({2, 3}, 1, 1));
    CHECK_THROWS_AS(nielsen_precondition({}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(nielsen_precondition({1, 3}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(nielsen_precondition({3, 3}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(nielsen_precondition({2, 3}, 0, 1), std::invalid_argument);
}

TEST_CASE("nielsen_bound") {
    CHECK(nielsen_bound(1, 1) == 2);
    CHECK(nielsen_bound(1, 2) == 12);
    CHECK(nielsen_bound(2, 2) == 72);
    CHECK_THROWS_AS(nielsen_bound(1, 25), BudgetError);
}

TEST_CASE("nielsen hypothesis implies the product bound") {
    // random instances of (xs, a, b) satisfying the hypothesis
    std::mt19937_64 rng(0xace0fba5eull);
    int tested = 0;
    while (tested < 1000) {
        u32 r = (u32)(rng() % 6) + 1;
        std::set<u64> xset;
        while (xset.size() < r) xset.insert(2 + rng() % 49);
        std::vector<u64> xs(xset.begin(), xset.end());
        u64 a = 1 + rng() % 5;
        Rational lower(1), upper(1);
        for (u32 j = 0; j < r; ++j) lower *= make_rational(to_big(xs[j] - 1), to_big(xs[j]));
        for (u32 j = 0; j + 1 < r; ++j) upper *= make_rational(to_big(xs[j] - 1), to_big(xs[j]));
        BigInt b_hi = (to_big(a) * lower.get_den()) / lower.get_num();
        BigInt b_lo = (to_big(a) * upper.get_den()) / upper.get_num() + 1;
        if (b_lo > b_hi) continue;  // no natural b fits; resample
        // every b in the window satisfies the hypothesis; test the extremes
        for (BigInt b : {b_lo, b_hi}) {
            REQUIRE(b.fits_ulong_p());
            u64 bv = mpz_get_ui(b.get_mpz_t());
            REQUIRE(nielsen_precondition(xs, a, bv));
            BigInt prod(1);
            for (u64 x : xs) prod *= to_big(x);
            CHECK(to_big(a) * prod <= nielsen_bound(a, r));
        }
        ++tested;
    }
}

TEST_CASE("verify_nielsen_instance on the worked examples") {
    CHECK(verify_nielsen_instance(factorize(15), euler_phi(factorize(15)) - 1,
                                  schemmel_s2(factorize(15))));
    CHECK(verify_nielsen_instance(factorize(105), euler_phi(factorize(105)) - 1,
                                  schemmel_s2(factorize(105))));
    u64 n7 = 3ull * 5 * 7 * 11 * 13 * 17 * 19;
    CHECK(verify_nielsen_instance(factorize(n7), euler_phi(factorize(n7)) - 1,
                                  schemmel_s2(factorize(n7))));
    CHECK_THROWS_AS(verify_nielsen_instance(factorize(9), 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(verify_nielsen_instance(factorize(10), 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(verify_nielsen_instance(factorize(5), 3, 3), std::invalid_argument);
}

TEST_CASE("deaconescu_upper_bound") {
    CHECK(deaconescu_upper_bound(1) == 4);
    CHECK(deaconescu_upper_bound(2) == 48);
    BigNat expect = (BigInt(1) << 135) - (BigInt(1) << 71);
    CHECK(deaconescu_upper_bound(7) == expect);
    CHECK(deaconescu_upper_bound(7).get_str() == "43556142965880123320950766509831508459520");
    CHECK_THROWS_AS(deaconescu_upper_bound(0), std::invalid_argument);
    CHECK_THROWS_AS(deaconescu_upper_bound(21), BudgetError);
}

TEST_CASE("poly_residue examples") {
    CHECK(poly_residue({1}, 3) == 2);      // P = X + 1, M = 3
    CHECK(poly_residue({0, 0}, 5) == 1);   // P = X^2
    CHECK(poly_residue({-1}, 3) == -4);    // P = X - 1
    CHECK_THROWS_AS(poly_residue({}, 3), std::invalid_argument);
}

TEST_CASE("poly_residue equals M^d * P(-1/M)") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 500; ++t) {
        u32 d = (u32)(rng() % 6) + 1;
        std::vector<int64_t> coeffs;
        for (u32 j = 0; j < d; ++j) coeffs.push_back((int64_t)(rng() % 21) - 10);
        u64 m = 3 + 2 * (rng() % 49);

        // independent route: Horner evaluation of P at -1/M in exact rationals
        Rational x = make_rational(BigInt(-1), to_big(m));
        Rational acc(1);
        for (u32 j = 0; j < d; ++j) acc = acc * x + Rational(BigInt((long)coeffs[j]));
        BigInt mpow;
        mpz_ui_pow_ui(mpow.get_mpz_t(), (unsigned long)m, d);
        Rational rhs = acc * Rational(mpow);

        REQUIRE(rhs.get_den() == 1);
        CHECK(poly_residue(coeffs, m) == rhs.get_num());
    }
}
