// Exact arbitrary-precision arithmetic, backed by GMP. Everything here is
// integer or reduced-fraction math; no floating point enters any comparison.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace deacon {

using BigInt = mpz_class;   // arbitrary-precision integer
using BigNat = mpz_class;   // non-negative by contract
using Rational = mpq_class; // always kept in lowest terms

// unsigned long is 64-bit on every platform this builds on; keep the one
// required conversion in a single place.
inline BigInt to_big(uint64_t v) { return BigInt((unsigned long)v); }

// mpq_class(n, d) does not reduce on its own; this does.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den) {
    return make_rational(BigInt(num), BigInt(den));
}

inline bool is_reduced(const Rational& q) {
    return gcd(BigInt(q.get_num()), BigInt(q.get_den())) == 1 && q.get_den() > 0;
}

// "num/den", matching how the CLI prints exact ratios.
inline std::string rational_to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace deacon
