#include "deacon/props.hpp"

#include <cstdio>

namespace deacon {

std::string record_to_json(const ClassificationRecord& r) {
    char buf[256];
    int len;
    if (r.multiplier) {
        len = std::snprintf(buf, sizeof buf,
                            "{\"n\":%llu,\"phi\":%llu,\"s2\":%llu,\"is_prime\":%s,"
                            "\"is_lehmer\":%s,\"is_deaconescu\":%s,\"multiplier\":%llu}",
                            (unsigned long long)r.n, (unsigned long long)r.phi,
                            (unsigned long long)r.s2, r.is_prime ? "true" : "false",
                            r.is_lehmer ? "true" : "false", r.is_deaconescu ? "true" : "false",
                            (unsigned long long)*r.multiplier);
    } else {
        len = std::snprintf(buf, sizeof buf,
                            "{\"n\":%llu,\"phi\":%llu,\"s2\":%llu,\"is_prime\":%s,"
                            "\"is_lehmer\":%s,\"is_deaconescu\":%s,\"multiplier\":null}",
                            (unsigned long long)r.n, (unsigned long long)r.phi,
                            (unsigned long long)r.s2, r.is_prime ? "true" : "false",
                            r.is_lehmer ? "true" : "false", r.is_deaconescu ? "true" : "false");
    }
    return std::string(buf, (size_t)len);
}

ClassificationRecord classify_from_values(u64 n, u64 phi, u64 s2, bool prime) {
    ClassificationRecord r;
    r.n = n;
    r.phi = phi;
    r.s2 = s2;
    r.is_prime = prime;
    if (s2 > 0 && divides(s2, phi - 1)) r.multiplier = (phi - 1) / s2;
    r.is_lehmer = !prime && n >= 2 && divides(phi, n - 1);
    r.is_deaconescu = !prime && n >= 2 && r.multiplier.has_value();
    return r;
}

ClassificationRecord classify(u64 n) {
    if (n < 2) throw std::invalid_argument("classify: n must be >= 2");
    Factorization f = factorize(n);
    bool prime = f.factors.size() == 1 && f.factors[0].exponent == 1;
    return classify_from_values(n, euler_phi(f), schemmel_s2(f), prime);
}

std::optional<u64> deaconescu_multiplier(u64 n) {
    if (n < 2) throw std::invalid_argument("deaconescu_multiplier: n must be >= 2");
    return classify(n).multiplier;
}

bool is_deaconescu_number(u64 n) {
    if (n < 2) throw std::invalid_argument("is_deaconescu_number: n must be >= 2");
    return classify(n).is_deaconescu;
}

bool is_lehmer_number(u64 n) {
    if (n < 2) throw std::invalid_argument("is_lehmer_number: n must be >= 2");
    return classify(n).is_lehmer;
}

FilterVerdict structural_filter(const Factorization& f) {
    if (f.value < 2) throw std::invalid_argument("structural_filter: value must be >= 2");
    FilterVerdict v;
    v.n = f.value;
    v.fails_odd = f.value % 2 == 0;
    v.fails_squarefree = !is_squarefree(f);
    v.fails_omega7 = omega(f) < 7;
    v.passes_all = !v.fails_odd && !v.fails_squarefree && !v.fails_omega7;
    return v;
}

D1ScanReport check_d1_is_primes(u64 limit, u64 memory_budget) {
    if (limit < 2) throw std::invalid_argument("check_d1_is_primes: limit must be >= 2");
    D1ScanReport report;
    report.limit = limit;
    report.all_primes_in_d1 = true;
    TotientTables t = TotientTables::build(limit, memory_budget);
    for (u64 n = 2; n <= limit; ++n) {
        u64 phi = t.phi[n], s2 = t.s2[n];
        if (t.is_prime(n)) {
            ++report.primes_checked;
            // Membership in D_1: for odd p the quotient is exactly 1, for
            // p = 2 both sides of the defining equation are 0.
            if (!divides(s2, phi - 1)) report.all_primes_in_d1 = false;
            if (n > 2 && (phi - 1) / s2 != 1) report.all_primes_in_d1 = false;
        } else if (s2 > 0 && divides(s2, phi - 1) && (phi - 1) / s2 == 1) {
            report.composite_violations.push_back(n);
        }
    }
    return report;
}

}  // namespace deacon
