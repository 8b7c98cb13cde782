// Exact-rational and big-integer machinery behind the known structure
// results for composite solutions of M * S2(n) = phi(n) - 1:
//
//   - the ratio phi(n)/S2(n) = prod (p-1)/(p-2) that any multiplier must
//     stay strictly below,
//   - the products Q_r over the first r odd primes (Q_r < 5 for r <= 6) and
//     the same products with 3 skipped (< 3 for r <= 6), which force M = 3
//     and 3 | n in the 2 < omega <= 6 range,
//   - the mod-3 obstruction that then rules that range out entirely,
//   - Nielsen's inequality: 1 < x_1 < ... < x_r and
//     prod(1 - 1/x_j) <= a/b < prod_{j<r}(1 - 1/x_j) imply
//     a * prod x_j <= (a+1)^(2^r) - (a+1)^(2^(r-1)),
//   - the resulting cap n < 2^(2^K + K) - 2^(2^(K-1) + K) for K = omega(n),
//   - the signed residue S = M^d * P(-1/M) that bounds any composite
//     solution with P(S2(n)) = 0 mod phi(n) for monic P.
//
// All comparisons are exact (GMP rationals); nothing here rounds.

#pragma once

#include <cstdint>
#include <vector>

#include "deacon/arith.hpp"
#include "deacon/rational.hpp"

namespace deacon {

// prod (p_i - 1)/(p_i - 2) over the primes of odd squarefree n; equals
// phi(n)/S2(n). Rejects even or non-squarefree input.
Rational ratio_phi_over_s2(const Factorization& f);

// Strict comparison phi(n)/S2(n) > m, evaluated exactly. Equality fails.
bool ratio_exceeds(const Factorization& f, u64 m);

// Q_r: the ratio product over the first r odd primes 3, 5, 7, ... This is
// the supremum of ratio_phi_over_s2 over all odd squarefree n with omega = r.
Rational q_product(u32 r);

// Same product starting from 5 (the first r odd primes with 3 skipped);
// the supremum when additionally 3 does not divide n.
Rational skip3_product(u32 r);

// All pairs of odd primes p1 < p2 <= prime_limit whose pair equation
// M (p1-2)(p2-2) = (p1-1)(p2-1) - 1 has an odd integer solution M >= 3.
// The scan is expected to come back empty: the equation forces
// M - 1 = 1/(p1-2) + 1/(p2-2) <= 4/3, so M = 2, which is even.
struct OmegaTwoSolution {
    u64 p1, p2, m;
    bool operator==(const OmegaTwoSolution&) const = default;
};
std::vector<OmegaTwoSolution> omega2_scan(u64 prime_limit);

// For distinct primes p_i >= 5: verifies that 3 prod(p_i - 2) =
// 2 prod(p_i - 1) - 1 is unsolvable mod 3, i.e. that prod(p_i - 1) mod 3
// lands in {0, 1}, never the required 2. Rejects 3 or any even input.
bool mod3_obstruction_check(const std::vector<u64>& primes);

// Nielsen's hypothesis: prod(1 - 1/x_j) <= a/b < prod_{j<r}(1 - 1/x_j),
// exact rationals, empty upper product = 1. xs strictly increasing, > 1.
bool nielsen_precondition(const std::vector<u64>& xs, u64 a, u64 b);

// Nielsen's conclusion bound (a+1)^(2^r) - (a+1)^(2^(r-1)), exact.
// Throws BudgetError when 2^r exceeds the exponent budget.
BigNat nielsen_bound(u64 a, u32 r, u32 exponent_budget_log2 = kDefaultExponentBudgetLog2);

// Replays the upper-bound argument on a concrete odd squarefree n with
// omega >= 2, given phi(n) - 1 and S2(n) >= 1. Checks, all exactly:
//   1. the sandwich prod(1 - 1/x_j) < s2/(phi-1) < prod_{j<K}(1 - 1/x_j)
//      with x_j = p_j - 1 (the strict form; the upper side rests on
//      phi(n) > p_K - 1),
//   2. nielsen_precondition(xs, s2, phi-1), and then the instance bound
//      s2 * prod x_j <= nielsen_bound(s2, K),
//   3. when (phi-1)/s2 is a natural number b (or some natural b fits the
//      a = 1 window at all), the a = 1 instance: prod x_j <=
//      nielsen_bound(1, K).
// Returns true iff every applicable check holds.
bool verify_nielsen_instance(const Factorization& f, u64 phi_minus1, u64 s2);

// 2^(2^K + K) - 2^(2^(K-1) + K): the cap on any composite solution with
// omega = K. Throws BudgetError past the exponent budget.
BigNat deaconescu_upper_bound(u32 k, u32 exponent_budget_log2 = kDefaultExponentBudgetLog2);

// S = (-1)^d + a_1 M (-1)^(d-1) + ... + a_d M^d for monic
// P(X) = X^d + a_1 X^(d-1) + ... + a_d, i.e. M^d * P(-1/M) as an exact
// integer. coeffs holds a_1..a_d, d >= 1.
BigInt poly_residue(const std::vector<int64_t>& coeffs, u64 m);

}  // namespace deacon
