#include "deacon/arith.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

namespace deacon {

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("64-bit multiply overflow: " + std::to_string(a) + " * " + std::to_string(b));
    return r;
}

bool Factorization::valid() const {
    if (value == 0) return false;
    u64 prod = 1;
    u64 prev = 0;
    for (const auto& [p, e] : factors) {
        if (p <= prev || e == 0 || !is_prime_u64(p)) return false;
        prev = p;
        for (u32 i = 0; i < e; ++i) {
            if (__builtin_mul_overflow(prod, p, &prod)) return false;
        }
    }
    return prod == value && (factors.empty() == (value == 1));
}

std::vector<u64> sieve_primes(u64 limit, u64 memory_budget) {
    if (limit >= memory_budget)
        throw BudgetError("sieve_primes(" + std::to_string(limit) + ") needs " +
                          std::to_string(limit) + "+1 bytes, budget is " +
                          std::to_string(memory_budget));
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (u64 i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (u64 j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    for (u64 i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

namespace {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Brent's cycle variant of Pollard rho. Deterministic: the polynomial
// constant starts at 1 and increments on failure, so repeated runs always
// take the same path.
u64 rho_factor(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, d = 1, saved = 2;
        int power = 1, lam = 1;
        while (d == 1) {
            if (lam == power) {
                saved = y;
                power *= 2;
                lam = 0;
            }
            y = (mulmod(y, y, n) + c) % n;
            ++lam;
            u64 diff = y > saved ? y - saved : saved - y;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = sieve_primes(1 << 16);
    return primes;
}

void factor_recursive(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = rho_factor(n);
    factor_recursive(d, out);
    factor_recursive(n / d, out);
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Exact for n < 3.3e24 (Sorenson & Webster), hence for all 64-bit n.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    f.value = n;
    u64 m = n;
    for (u64 p : small_primes()) {
        if (p * p > m) break;
        if (m % p != 0) continue;
        u32 e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    }
    if (m > 1) {
        // Cofactor has no prime below 2^16; either prime or a rho job.
        std::vector<u64> rest;
        factor_recursive(m, rest);
        std::sort(rest.begin(), rest.end());
        for (size_t i = 0; i < rest.size();) {
            size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            f.factors.push_back({rest[i], (u32)(j - i)});
            i = j;
        }
    }
    return f;
}

namespace {

// prod over factors of p^(e-1) * (p - delta); the shared shape of phi and s2.
// p = 2 with delta = 2 contributes 0, which is exactly S2's behaviour on
// even numbers.
u64 totient_product(const Factorization& f, u64 delta) {
    u64 r = 1;
    for (const auto& [p, e] : f.factors) {
        u64 term = p - delta;
        for (u32 i = 1; i < e; ++i) term = checked_mul(term, p);
        r = checked_mul(r, term);
    }
    return r;
}

}  // namespace

u64 euler_phi(const Factorization& f) { return totient_product(f, 1); }

u64 schemmel_s2(const Factorization& f) { return totient_product(f, 2); }

u32 omega(const Factorization& f) { return (u32)f.factors.size(); }

bool is_squarefree(const Factorization& f) {
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](const PrimePower& pp) { return pp.exponent == 1; });
}

ExceptionalUnitSet exceptional_units(u64 n, u64 budget) {
    if (n == 0) throw std::invalid_argument("exceptional_units: n must be >= 1");
    if (n > budget)
        throw BudgetError("exceptional_units(" + std::to_string(n) + ") exceeds brute-force budget " +
                          std::to_string(budget));
    ExceptionalUnitSet s;
    s.modulus = n;
    for (u64 a = 0; a < n; ++a) {
        u64 g1 = std::gcd(a, n);             // gcd(0, n) = n
        if (g1 != 1) continue;
        u64 am1 = (a == 0) ? n - 1 : a - 1;  // a - 1 mod n
        if (std::gcd(am1, n) == 1) s.members.push_back(a);
    }
    return s;
}

u64 count_exceptional(u64 n, u64 budget) {
    if (n == 0) throw std::invalid_argument("count_exceptional: n must be >= 1");
    if (n > budget)
        throw BudgetError("count_exceptional(" + std::to_string(n) + ") exceeds brute-force budget " +
                          std::to_string(budget));
    if (n == 1) return 1;
    // a survives iff no prime p | n divides a or a - 1. Marking multiples is
    // the same residue scan as the gcd version, minus the gcd calls.
    std::vector<uint8_t> bad(n, 0);
    Factorization f = factorize(n);
    for (const auto& [p, e] : f.factors) {
        for (u64 m = 0; m < n; m += p) {
            bad[m] = 1;                    // p | a
            if (m + 1 < n) bad[m + 1] = 1; // p | a - 1
        }
    }
    u64 count = 0;
    for (u64 a = 0; a < n; ++a) count += !bad[a];
    return count;
}

TotientTables TotientTables::build(u64 limit, u64 memory_budget) {
    if (limit >= UINT32_MAX)
        throw BudgetError("TotientTables limited to 32-bit ranges");
    u64 bytes = (limit + 1) * 12;
    if (bytes > memory_budget)
        throw BudgetError("TotientTables(" + std::to_string(limit) + ") needs " +
                          std::to_string(bytes) + " bytes, budget is " +
                          std::to_string(memory_budget));
    TotientTables t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    t.phi.assign(limit + 1, 0);
    t.s2.assign(limit + 1, 0);
    if (limit >= 1) {
        t.phi[1] = 1;
        t.s2[1] = 1;
    }
    std::vector<u32> primes;
    for (u64 i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = (u32)i;
            t.phi[i] = (u32)(i - 1);
            t.s2[i] = (u32)(i - 2);
            primes.push_back((u32)i);
        }
        for (u32 p : primes) {
            if (p > t.spf[i] || i * p > limit) break;
            u64 ip = i * p;
            t.spf[ip] = p;
            if (i % p == 0) {
                t.phi[ip] = t.phi[i] * p;
                t.s2[ip] = t.s2[i] * p;
            } else {
                t.phi[ip] = t.phi[i] * (p - 1);
                t.s2[ip] = t.s2[i] * (p - 2);
            }
        }
    }
    return t;
}

}  // namespace deacon
