// Exact 64-bit integer arithmetic: primes, factorization, the totients
// phi(n) and S2(n), and the brute-force exceptional-unit oracle.
//
// S2 is Schemmel's totient, S2(n) = n * prod_{p|n} (1 - 2/p). It counts the
// exceptional units of Z_n: residues a with gcd(a, n) = gcd(a - 1, n) = 1.
// The counting route never touches the product formula, so the two serve as
// independent oracles for each other.

#pragma once

#include <cstdint>
#include <vector>

#include "deacon/errors.hpp"

namespace deacon {

using u32 = uint32_t;
using u64 = uint64_t;

// Default resource limits. Each operation that can blow up takes the budget
// as a parameter so callers (and tests) can tighten or relax it.
inline constexpr u64 kDefaultMemoryBudgetBytes = 2ull << 30;     // 2 GiB
inline constexpr u64 kDefaultBruteForceBudget = 1'000'000;       // exceptional-unit scans
inline constexpr u32 kDefaultExponentBudgetLog2 = 20;            // 2^r <= 2^20 in big powers

// a * b, throwing OverflowError instead of wrapping.
u64 checked_mul(u64 a, u64 b);

struct PrimePower {
    u64 prime;
    u32 exponent;
    bool operator==(const PrimePower&) const = default;
};

// Canonical prime-power decomposition. Primes strictly increasing, exponents
// >= 1, product reconstructs value. Empty factor list iff value == 1.
struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;

    bool valid() const;
};

// All primes in [2, limit], ascending. The sieve allocates limit+1 bytes and
// refuses to exceed memory_budget.
std::vector<u64> sieve_primes(u64 limit, u64 memory_budget = kDefaultMemoryBudgetBytes);

// Deterministic primality for the full 64-bit range (Miller-Rabin with a
// fixed witness set that is exact below 3.3e24).
bool is_prime_u64(u64 n);

// Trial division by sieved primes up to 2^16, then deterministic Brent-rho
// for the remaining <= 64-bit cofactors. Rejects n = 0.
Factorization factorize(u64 n);

// phi(n) = prod p^(e-1) * (p - 1). Exact; never exceeds n.
u64 euler_phi(const Factorization& f);

// S2(n) = prod p^(e-1) * (p - 2). Zero whenever 2 | n; S2(1) = 1.
u64 schemmel_s2(const Factorization& f);

// Number of distinct prime divisors.
u32 omega(const Factorization& f);

// True iff every exponent is 1 (vacuously true for n = 1).
bool is_squarefree(const Factorization& f);

// Z_n^{**}: residues a in [0, n) with gcd(a, n) = 1 and gcd(a - 1, n) = 1,
// where a - 1 is taken mod n and gcd(0, m) = m. For n = 1 the set is {0}.
struct ExceptionalUnitSet {
    u64 modulus = 1;
    std::vector<u64> members;
};

// Definitional gcd scan over all residues. Throws BudgetError when n exceeds
// the brute-force budget.
ExceptionalUnitSet exceptional_units(u64 n, u64 budget = kDefaultBruteForceBudget);

// |Z_n^{**}| by residue scan (multiples of each prime divisor of n mark the
// residues failing either gcd condition). Same answer as the gcd scan, a few
// hundred times faster; still independent of the (p - 2) product formula.
u64 count_exceptional(u64 n, u64 budget = kDefaultBruteForceBudget);

// Smallest-prime-factor linear sieve with phi and s2 filled in by the
// standard multiplicative recurrence. Backs the exhaustive scans; 12 bytes
// per n, so the memory budget caps the range.
struct TotientTables {
    u64 limit = 0;
    std::vector<u32> spf;   // smallest prime factor; spf[p] == p iff p prime
    std::vector<u32> phi;
    std::vector<u32> s2;

    static TotientTables build(u64 limit, u64 memory_budget = kDefaultMemoryBudgetBytes);

    bool is_prime(u64 n) const { return n >= 2 && spf[n] == n; }
};

}  // namespace deacon
