#include "deacon/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace deacon {

namespace {

// First `count` odd primes, sieving a growing range until we have enough.
std::vector<u64> first_odd_primes(u32 count) {
    u64 limit = 64;
    for (;;) {
        std::vector<u64> primes = sieve_primes(limit);
        std::vector<u64> odd;
        for (u64 p : primes)
            if (p != 2) odd.push_back(p);
        if (odd.size() >= count) {
            odd.resize(count);
            return odd;
        }
        limit *= 2;
    }
}

Rational ratio_term(u64 p) { return make_rational(to_big(p - 1), to_big(p - 2)); }

Rational u64_rational(u64 num, u64 den) { return make_rational(to_big(num), to_big(den)); }

// prod over the first `take` entries of (1 - 1/x_j); empty product = 1.
Rational defect_product(const std::vector<u64>& xs, size_t take) {
    Rational r(1);
    for (size_t j = 0; j < take; ++j) r *= u64_rational(xs[j] - 1, xs[j]);
    return r;
}

}  // namespace

Rational ratio_phi_over_s2(const Factorization& f) {
    if (f.value % 2 == 0)
        throw std::invalid_argument("ratio_phi_over_s2: n must be odd");
    if (!is_squarefree(f))
        throw std::invalid_argument("ratio_phi_over_s2: n must be squarefree");
    Rational r(1);
    for (const auto& [p, e] : f.factors) r *= ratio_term(p);
    return r;
}

bool ratio_exceeds(const Factorization& f, u64 m) {
    return ratio_phi_over_s2(f) > Rational(to_big(m));
}

Rational q_product(u32 r) {
    if (r < 1) throw std::invalid_argument("q_product: r must be >= 1");
    Rational q(1);
    for (u64 p : first_odd_primes(r)) q *= ratio_term(p);
    return q;
}

Rational skip3_product(u32 r) {
    if (r < 1) throw std::invalid_argument("skip3_product: r must be >= 1");
    std::vector<u64> primes = first_odd_primes(r + 1);
    Rational q(1);
    for (u32 i = 1; i <= r; ++i) q *= ratio_term(primes[i]);
    return q;
}

std::vector<OmegaTwoSolution> omega2_scan(u64 prime_limit) {
    if (prime_limit < 5) throw std::invalid_argument("omega2_scan: prime_limit must be >= 5");
    std::vector<u64> primes = sieve_primes(prime_limit);
    std::vector<u64> odd;
    for (u64 p : primes)
        if (p != 2) odd.push_back(p);
    std::vector<OmegaTwoSolution> solutions;
    for (size_t i = 0; i < odd.size(); ++i) {
        for (size_t j = i + 1; j < odd.size(); ++j) {
            u64 p1 = odd[i], p2 = odd[j];
            u64 den = checked_mul(p1 - 2, p2 - 2);
            u64 num = checked_mul(p1 - 1, p2 - 1) - 1;
            if (num % den != 0) continue;
            u64 m = num / den;
            if (m >= 3 && m % 2 == 1) solutions.push_back({p1, p2, m});
        }
    }
    return solutions;
}

bool mod3_obstruction_check(const std::vector<u64>& primes) {
    if (primes.empty()) throw std::invalid_argument("mod3_obstruction_check: empty input");
    std::vector<u64> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        u64 p = sorted[i];
        if (p == 3) throw std::invalid_argument("mod3_obstruction_check: 3 not allowed");
        if (p % 2 == 0) throw std::invalid_argument("mod3_obstruction_check: even input");
        if (p < 5) throw std::invalid_argument("mod3_obstruction_check: primes must be >= 5");
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw std::invalid_argument("mod3_obstruction_check: duplicate prime");
    }
    // Solvability would need 2 * prod(p_i - 1) - 1 = 0 mod 3, i.e. the
    // product = 2 mod 3. Each factor is 0 or 1 mod 3 (p != 3), so the
    // product stays in {0, 1}.
    u64 prod_mod3 = 1;
    for (u64 p : primes) prod_mod3 = prod_mod3 * ((p - 1) % 3) % 3;
    return prod_mod3 != 2;
}

bool nielsen_precondition(const std::vector<u64>& xs, u64 a, u64 b) {
    if (xs.empty()) throw std::invalid_argument("nielsen_precondition: xs must be non-empty");
    if (a < 1 || b < 1) throw std::invalid_argument("nielsen_precondition: a, b must be >= 1");
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 1) throw std::invalid_argument("nielsen_precondition: xs entries must be > 1");
        if (i > 0 && xs[i] <= xs[i - 1])
            throw std::invalid_argument("nielsen_precondition: xs must be strictly increasing");
    }
    Rational full = defect_product(xs, xs.size());
    Rational allbutlast = defect_product(xs, xs.size() - 1);
    Rational ab = u64_rational(a, b);
    return full <= ab && ab < allbutlast;
}

BigNat nielsen_bound(u64 a, u32 r, u32 exponent_budget_log2) {
    if (a < 1 || r < 1) throw std::invalid_argument("nielsen_bound: a, r must be >= 1");
    if (r > exponent_budget_log2)
        throw BudgetError("nielsen_bound: 2^" + std::to_string(r) + " exceeds exponent budget 2^" +
                          std::to_string(exponent_budget_log2));
    BigInt base = to_big(a) + 1;
    BigInt high, low;
    mpz_pow_ui(high.get_mpz_t(), base.get_mpz_t(), 1ul << r);
    mpz_pow_ui(low.get_mpz_t(), base.get_mpz_t(), 1ul << (r - 1));
    return high - low;
}

bool verify_nielsen_instance(const Factorization& f, u64 phi_minus1, u64 s2) {
    if (f.value % 2 == 0 || !is_squarefree(f) || omega(f) < 2)
        throw std::invalid_argument("verify_nielsen_instance: need odd squarefree n with omega >= 2");
    if (s2 < 1 || phi_minus1 < 1)
        throw std::invalid_argument("verify_nielsen_instance: phi-1 and s2 must be >= 1");
    u32 k = omega(f);

    std::vector<u64> xs;
    xs.reserve(k);
    for (const auto& [p, e] : f.factors) xs.push_back(p - 1);

    // 1. strict sandwich around s2 / (phi - 1); the upper side encodes
    //    phi(n) > p_K - 1.
    Rational value = u64_rational(s2, phi_minus1);
    Rational lower = defect_product(xs, xs.size());
    Rational upper = defect_product(xs, xs.size() - 1);
    if (!(lower < value && value < upper)) return false;

    // 2. hypothesis with (a, b) = (s2, phi - 1), then the instance bound.
    if (!nielsen_precondition(xs, s2, phi_minus1)) return false;
    BigInt prod_xs(1);
    for (u64 x : xs) prod_xs *= to_big(x);
    if (to_big(s2) * prod_xs > nielsen_bound(s2, k)) return false;

    // 3. the a = 1 instance. A natural b fits iff lower <= 1/b < upper;
    //    the divisible case b = (phi - 1)/s2 is the one the upper-bound
    //    theorem actually uses.
    if (phi_minus1 % s2 == 0) {
        u64 b = phi_minus1 / s2;
        if (!nielsen_precondition(xs, 1, b)) return false;
        if (prod_xs > nielsen_bound(1, k)) return false;
    } else {
        BigInt b_hi = lower.get_den() / lower.get_num();      // floor(1/lower)
        BigInt b_lo = upper.get_den() / upper.get_num() + 1;  // smallest b with 1/b < upper
        if (b_lo <= b_hi && b_hi.fits_ulong_p()) {
            u64 b = mpz_get_ui(b_hi.get_mpz_t());
            if (!nielsen_precondition(xs, 1, b)) return false;
            if (prod_xs > nielsen_bound(1, k)) return false;
        }
    }
    return true;
}

BigNat deaconescu_upper_bound(u32 k, u32 exponent_budget_log2) {
    if (k < 1) throw std::invalid_argument("deaconescu_upper_bound: K must be >= 1");
    if (k > exponent_budget_log2)
        throw BudgetError("deaconescu_upper_bound: 2^" + std::to_string(k) +
                          " exceeds exponent budget 2^" + std::to_string(exponent_budget_log2));
    BigInt high = BigInt(1) << (mp_bitcnt_t)((1ull << k) + k);
    BigInt low = BigInt(1) << (mp_bitcnt_t)((1ull << (k - 1)) + k);
    return high - low;
}

BigInt poly_residue(const std::vector<int64_t>& coeffs, u64 m) {
    if (coeffs.empty()) throw std::invalid_argument("poly_residue: degree must be >= 1");
    size_t d = coeffs.size();
    BigInt mz = to_big(m);
    BigInt s = (d % 2 == 0) ? 1 : -1;  // the a_0 = 1 term, (-1)^d
    BigInt mpow(1);
    for (size_t j = 1; j <= d; ++j) {
        mpow *= mz;  // M^j
        BigInt term = BigInt((long)coeffs[j - 1]) * mpow;
        if ((d - j) % 2 == 1) term = -term;  // (-1)^(d-j)
        s += term;
    }
    return s;
}

}  // namespace deacon
