#include <algorithm>
#include <numeric>
#include <random>

#include "brute.hpp"
#include "deacon/arith.hpp"
#include "doctest.h"

using namespace deacon;

TEST_CASE("sieve_primes basics") {
    CHECK(sieve_primes(10) == std::vector<u64>{2, 3, 5, 7});
    CHECK(sieve_primes(1).empty());
    CHECK(sieve_primes(0).empty());
    CHECK(sieve_primes(2) == std::vector<u64>{2});

    // independent count by trial division
    auto expect = brute::primes_upto(100);
    CHECK(expect.size() == 25);
    CHECK(sieve_primes(100) == expect);
    CHECK(sieve_primes(10'000) == brute::primes_upto(10'000));
}

TEST_CASE("sieve_primes memory budget") {
    CHECK_THROWS_AS(sieve_primes(1'000'000, 1000), BudgetError);
}

TEST_CASE("factorize canonical form") {
    Factorization one = factorize(1);
    CHECK(one.value == 1);
    CHECK(one.factors.empty());
    CHECK(one.valid());

    Factorization f15 = factorize(15);
    CHECK(f15.factors == std::vector<PrimePower>{{3, 1}, {5, 1}});

    Factorization f561 = factorize(561);
    CHECK(f561.factors == std::vector<PrimePower>{{3, 1}, {11, 1}, {17, 1}});

    Factorization f8 = factorize(8);
    CHECK(f8.factors == std::vector<PrimePower>{{2, 3}});

    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize agrees with trial division") {
    for (u64 n : {2ull, 97ull, 1024ull, 30030ull, 65537ull, 123456ull, 999983ull}) {
        auto expect = brute::factor(n);
        Factorization f = factorize(n);
        std::vector<u64> flat;
        for (auto [p, e] : f.factors)
            for (u32 i = 0; i < e; ++i) flat.push_back(p);
        CHECK(flat == expect);
        CHECK(f.valid());
    }
}

TEST_CASE("factorize round-trip on sampled and random values") {
    std::mt19937_64 rng(42);
    for (u64 n = 1; n <= 2000; ++n) CHECK(factorize(n).valid());
    for (int i = 0; i < 300; ++i) {
        u64 n = rng() % 1'000'000 + 1;
        CHECK(factorize(n).valid());
    }
    // beyond the trial-division cutoff: forces the rho path
    for (int i = 0; i < 20; ++i) {
        u64 a = 100'003 + 2 * (rng() % 50'000);
        u64 n = a * (a + 2);
        Factorization f = factorize(n);
        CHECK(f.valid());
        CHECK(f.value == n);
    }
    // large semiprime with repeated factor
    u64 p = 1'000'000'007;
    Factorization sq = factorize(p * p);
    CHECK(sq.factors == std::vector<PrimePower>{{p, 2}});
}

TEST_CASE("is_prime_u64") {
    auto small = brute::primes_upto(2000);
    for (u64 n = 0; n <= 2000; ++n)
        CHECK(is_prime_u64(n) == std::binary_search(small.begin(), small.end(), n));
    CHECK(is_prime_u64((1ull << 61) - 1));  // Mersenne prime
    CHECK_FALSE(is_prime_u64(561));         // Carmichael
    CHECK_FALSE(is_prime_u64((1ull << 61) + 1));
    CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
}

TEST_CASE("euler_phi examples and counting oracle") {
    CHECK(euler_phi(factorize(1)) == 1);
    CHECK(euler_phi(factorize(10)) == 4);
    CHECK(euler_phi(factorize(561)) == 320);
    CHECK(brute::phi_by_counting(561) == 320);
    for (u64 n = 1; n <= 500; ++n) CHECK(euler_phi(factorize(n)) == brute::phi_by_counting(n));
}

TEST_CASE("schemmel_s2 examples") {
    CHECK(schemmel_s2(factorize(7)) == 5);
    CHECK(schemmel_s2(factorize(12)) == 0);
    CHECK(schemmel_s2(factorize(15)) == 3);
    CHECK(schemmel_s2(factorize(1)) == 1);
    CHECK(schemmel_s2(factorize(2)) == 0);
    CHECK(schemmel_s2(factorize(9)) == 3);
}

TEST_CASE("omega and is_squarefree") {
    CHECK(omega(factorize(1)) == 0);
    CHECK(omega(factorize(12)) == 2);
    CHECK(omega(factorize(255255)) == 6);
    CHECK(is_squarefree(factorize(15)));
    CHECK_FALSE(is_squarefree(factorize(9)));
    CHECK(is_squarefree(factorize(1)));
}

TEST_CASE("exceptional_units definitional scan") {
    auto s15 = exceptional_units(15);
    CHECK(s15.members == std::vector<u64>{2, 8, 14});
    CHECK(exceptional_units(2).members.empty());
    CHECK(exceptional_units(7).members == std::vector<u64>{2, 3, 4, 5, 6});
    CHECK(exceptional_units(1).members == std::vector<u64>{0});
    CHECK_THROWS_AS(exceptional_units(100, 50), BudgetError);
    CHECK_THROWS_AS(exceptional_units(0), std::invalid_argument);
}

TEST_CASE("count_exceptional equals the gcd scan") {
    CHECK(count_exceptional(15) == 3);
    CHECK(count_exceptional(1) == 1);
    CHECK(count_exceptional(9) == 3);
    for (u64 n = 1; n <= 2000; ++n) {
        CHECK(count_exceptional(n) == exceptional_units(n).members.size());
        CHECK(count_exceptional(n) == brute::exceptional_by_gcd(n));
    }
    CHECK_THROWS_AS(count_exceptional(100, 50), BudgetError);
}

TEST_CASE("oracle identity: |Z_n^{**}| = S2(n)") {
    for (u64 n = 1; n <= 20'000; ++n)
        CHECK(count_exceptional(n) == schemmel_s2(factorize(n)));
}

TEST_CASE("phi and s2 are multiplicative on coprime arguments") {
    std::mt19937_64 rng(7);
    int done = 0;
    while (done < 400) {
        u64 m = rng() % 10'000 + 1, n = rng() % 10'000 + 1;
        if (std::gcd(m, n) != 1) continue;
        Factorization fm = factorize(m), fn = factorize(n), fmn = factorize(m * n);
        CHECK(euler_phi(fmn) == euler_phi(fm) * euler_phi(fn));
        CHECK(schemmel_s2(fmn) == schemmel_s2(fm) * schemmel_s2(fn));
        ++done;
    }
}

TEST_CASE("phi(n)^2 >= n for odd n") {
    for (u64 n = 1; n <= 100'000; n += 2) {
        u64 phi = euler_phi(factorize(n));
        CHECK(phi * phi >= n);
    }
}

TEST_CASE("phi(n) > p_K - 1 for odd squarefree n with omega >= 2") {
    for (u64 n = 3; n <= 100'000; n += 2) {
        Factorization f = factorize(n);
        if (!is_squarefree(f) || omega(f) < 2) continue;
        u64 largest = f.factors.back().prime;
        CHECK(euler_phi(f) > largest - 1);
    }
}

TEST_CASE("totient tables match the factorization route") {
    TotientTables t = TotientTables::build(100'000);
    for (u64 n = 1; n <= 100'000; ++n) {
        Factorization f = factorize(n);
        CHECK(t.phi[n] == euler_phi(f));
        CHECK(t.s2[n] == schemmel_s2(f));
        if (n >= 2) CHECK(t.is_prime(n) == (f.factors.size() == 1 && f.factors[0].exponent == 1));
    }
    CHECK_THROWS_AS(TotientTables::build(100'000'000, 1000), BudgetError);
}

TEST_CASE("checked_mul") {
    CHECK(checked_mul(1ull << 32, 1ull << 31) == (1ull << 63));
    CHECK_THROWS_AS(checked_mul(1ull << 32, 1ull << 32), OverflowError);
}
