// Predicate layer: the divisibility M * S2(n) = phi(n) - 1, the Lehmer
// condition phi(n) | n - 1, and the structural filter (odd, squarefree,
// omega >= 7) that every composite solution of the first equation must pass.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deacon/arith.hpp"

namespace deacon {

// Total divisibility with the zero-divisor convention: 0 divides only 0.
// Makes even n >= 3 drop out of the multiplier arithmetic without a special
// case (S2 = 0 there, phi - 1 >= 1).
inline bool divides(u64 d, u64 x) { return d == 0 ? x == 0 : x % d == 0; }

// Per-n verdict. multiplier holds (phi - 1) / s2 when s2 > 0 divides phi - 1;
// n = 2 has s2 = 0 = phi - 1, where the quotient is indeterminate, so the
// field stays empty and 2 is just a prime.
struct ClassificationRecord {
    u64 n = 0;
    u64 phi = 0;
    u64 s2 = 0;
    bool is_prime = false;
    bool is_lehmer = false;
    bool is_deaconescu = false;
    std::optional<u64> multiplier;

    bool operator==(const ClassificationRecord&) const = default;
};

// One JSON object, fields in declaration order, absent multiplier as null.
std::string record_to_json(const ClassificationRecord& r);

// Build a record from already-computed totients (the sieve path).
ClassificationRecord classify_from_values(u64 n, u64 phi, u64 s2, bool prime);

// Factorize-and-classify for a single n >= 2.
ClassificationRecord classify(u64 n);

// (phi(n) - 1) / S2(n) when that quotient is a natural number, otherwise
// nothing. Requires n >= 2.
std::optional<u64> deaconescu_multiplier(u64 n);

// Composite n with S2(n) | phi(n) - 1. Conjectured to not exist.
bool is_deaconescu_number(u64 n);

// Composite n with phi(n) | n - 1. None are known.
bool is_lehmer_number(u64 n);

// Flags each necessary condition for composite membership in any D_M that n
// violates: odd, squarefree, omega >= 7.
struct FilterVerdict {
    u64 n = 0;
    bool fails_odd = false;
    bool fails_squarefree = false;
    bool fails_omega7 = false;
    bool passes_all = false;
};

FilterVerdict structural_filter(const Factorization& f);

// Exhaustive check that D_1 contains exactly the primes: every composite
// n <= limit with multiplier 1 is a violation (the list is expected empty),
// and every prime must satisfy divides(s2, phi - 1).
struct D1ScanReport {
    u64 limit = 0;
    u64 primes_checked = 0;
    bool all_primes_in_d1 = false;
    std::vector<u64> composite_violations;
};

D1ScanReport check_d1_is_primes(u64 limit, u64 memory_budget = kDefaultMemoryBudgetBytes);

}  // namespace deacon
