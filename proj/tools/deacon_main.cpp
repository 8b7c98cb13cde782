// deacon: command-line front end. Subcommands: totient, check, bound,
// verify, scan, search, resume. Exit codes: 0 clean, 2 usage, 3 resource
// budget, 4 checkpoint mismatch, 10 witness found (a counterexample to the
// conjecture -- never expected, but scriptable).

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "deacon/arith.hpp"
#include "deacon/bounds.hpp"
#include "deacon/props.hpp"
#include "deacon/search.hpp"

namespace {

using namespace deacon;

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kBudget = 3,
    kCheckpoint = 4,
    kWitness = 10,
};

enum class Format { human, json, csv };

Format parse_format(const std::string& s) {
    if (s == "human") return Format::human;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw std::invalid_argument("unknown format: " + s);
}

// Accepts plain decimal, XeY scientific shorthand (1e18), and 2^N.
BigInt parse_big(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    if (s.rfind("2^", 0) == 0) {
        unsigned long e = std::stoul(s.substr(2));
        return BigInt(1) << e;
    }
    try {
        auto epos = s.find_first_of("eE");
        if (epos != std::string::npos) {
            BigInt mant(s.substr(0, epos));
            unsigned long exp = std::stoul(s.substr(epos + 1));
            BigInt pow10;
            mpz_ui_pow_ui(pow10.get_mpz_t(), 10, exp);
            return mant * pow10;
        }
        return BigInt(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: " + s);
    }
}

u64 parse_u64(const std::string& s) {
    BigInt v = parse_big(s);
    if (v < 0 || !v.fits_ulong_p()) throw std::invalid_argument("value out of 64-bit range: " + s);
    return mpz_get_ui(v.get_mpz_t());
}

u64 memory_budget_from_env() {
    if (const char* mb = std::getenv("DEACON_MEM_BUDGET_MB")) {
        u64 v = parse_u64(mb);
        return v << 20;
    }
    return kDefaultMemoryBudgetBytes;
}

// --- per-suite check output -------------------------------------------------

struct CheckPrinter {
    Format fmt;
    bool all_pass = true;
    bool csv_header_done = false;

    void line(const std::string& name, bool pass, const std::string& detail) {
        if (!pass) all_pass = false;
        switch (fmt) {
            case Format::human:
                std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
                break;
            case Format::json:
                std::printf("{\"check\":\"%s\",\"pass\":%s,\"detail\":\"%s\"}\n", name.c_str(),
                            pass ? "true" : "false", detail.c_str());
                break;
            case Format::csv:
                if (!csv_header_done) {
                    std::printf("check,pass,detail\n");
                    csv_header_done = true;
                }
                std::printf("%s,%s,\"%s\"\n", name.c_str(), pass ? "true" : "false", detail.c_str());
                break;
        }
    }
};

// --- totient / check / bound -------------------------------------------------

int run_totient(u64 n, Format fmt) {
    Factorization f = factorize(n);
    u64 phi = euler_phi(f), s2 = schemmel_s2(f);
    u32 om = omega(f);
    bool sq = is_squarefree(f);
    switch (fmt) {
        case Format::human:
            std::printf("n=%" PRIu64 " phi=%" PRIu64 " s2=%" PRIu64 " omega=%u squarefree=%s\n", n,
                        phi, s2, om, sq ? "true" : "false");
            break;
        case Format::json:
            std::printf("{\"n\":%" PRIu64 ",\"phi\":%" PRIu64 ",\"s2\":%" PRIu64
                        ",\"omega\":%u,\"squarefree\":%s}\n",
                        n, phi, s2, om, sq ? "true" : "false");
            break;
        case Format::csv:
            std::printf("n,phi,s2,omega,squarefree\n%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%u,%s\n", n,
                        phi, s2, om, sq ? "true" : "false");
            break;
    }
    return kOk;
}

void print_record(const ClassificationRecord& r, Format fmt, bool with_csv_header) {
    std::string mult = r.multiplier ? std::to_string(*r.multiplier) : "null";
    switch (fmt) {
        case Format::human:
            std::printf("n=%" PRIu64 " phi=%" PRIu64 " s2=%" PRIu64
                        " is_prime=%s is_lehmer=%s is_deaconescu=%s multiplier=%s\n",
                        r.n, r.phi, r.s2, r.is_prime ? "true" : "false",
                        r.is_lehmer ? "true" : "false", r.is_deaconescu ? "true" : "false",
                        mult.c_str());
            break;
        case Format::json:
            std::printf("%s\n", record_to_json(r).c_str());
            break;
        case Format::csv:
            if (with_csv_header) std::printf("n,phi,s2,is_prime,is_lehmer,is_deaconescu,multiplier\n");
            std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%s,%s,%s,%s\n", r.n, r.phi, r.s2,
                        r.is_prime ? "true" : "false", r.is_lehmer ? "true" : "false",
                        r.is_deaconescu ? "true" : "false",
                        r.multiplier ? std::to_string(*r.multiplier).c_str() : "");
            break;
    }
}

int run_check(u64 n, Format fmt) {
    if (n < 2) throw std::invalid_argument("check: n must be >= 2");
    ClassificationRecord r = classify(n);
    print_record(r, fmt, true);
    return (r.is_deaconescu || r.is_lehmer) ? kWitness : kOk;
}

int run_bound(u32 k, Format fmt) {
    BigNat b = deaconescu_upper_bound(k);
    u64 hi = (1ull << k) + k, lo = (1ull << (k - 1)) + k;
    switch (fmt) {
        case Format::human:
            std::printf("2^%" PRIu64 " - 2^%" PRIu64 " = %s\n", hi, lo, b.get_str().c_str());
            break;
        case Format::json:
            std::printf("{\"k\":%u,\"exp_high\":%" PRIu64 ",\"exp_low\":%" PRIu64
                        ",\"value\":\"%s\"}\n",
                        k, hi, lo, b.get_str().c_str());
            break;
        case Format::csv:
            std::printf("k,exp_high,exp_low,value\n%u,%" PRIu64 ",%" PRIu64 ",%s\n", k, hi, lo,
                        b.get_str().c_str());
            break;
    }
    return kOk;
}

// --- verify suites ------------------------------------------------------------

int verify_oracle(u64 limit, Format fmt) {
    CheckPrinter out{fmt};
    TotientTables t = TotientTables::build(limit, memory_budget_from_env());
    u64 first_bad = 0;
    for (u64 n = 1; n <= limit && !first_bad; ++n) {
        u64 s2 = n == 1 ? 1 : t.s2[n];
        if (count_exceptional(n, limit) != s2) first_bad = n;
    }
    out.line("oracle.count_matches_s2", first_bad == 0,
             first_bad ? "first mismatch at n=" + std::to_string(first_bad)
                       : "|Z_n^{**}| = S2(n) for all n <= " + std::to_string(limit));
    return out.all_pass ? kOk : 1;
}

int verify_lemma21(u64 limit, Format fmt) {
    CheckPrinter out{fmt};
    D1ScanReport rep = check_d1_is_primes(limit, memory_budget_from_env());
    out.line("lemma21.no_composite_multiplier_1", rep.composite_violations.empty(),
             rep.composite_violations.empty()
                 ? "no composite n <= " + std::to_string(limit) + " has multiplier 1"
                 : "violation at n=" + std::to_string(rep.composite_violations.front()));
    out.line("lemma21.primes_in_d1", rep.all_primes_in_d1,
             std::to_string(rep.primes_checked) + " primes all satisfy S2(p) | phi(p)-1");
    return out.all_pass ? kOk : 1;
}

int verify_thm11(u64 limit, Format fmt) {
    CheckPrinter out{fmt};

    Rational q6 = q_product(6);
    out.line("thm11.q6_exact", q6 == make_rational(2048, 495), "Q_6 = " + rational_to_string(q6));
    bool q_below_5 = true;
    for (u32 r = 3; r <= 6; ++r) q_below_5 = q_below_5 && q_product(r) < 5;
    out.line("thm11.q_r_below_5", q_below_5, "Q_r < 5 for 3 <= r <= 6");

    Rational s6 = skip3_product(6);
    out.line("thm11.skip3_exact", s6 == make_rational(2048, 935),
             "product without 3 = " + rational_to_string(s6));
    out.line("thm11.skip3_below_3", s6 < 3, "the 3-free ratio product stays below 3");

    auto pairs = omega2_scan(limit);
    out.line("thm11.omega2_scan_empty", pairs.empty(),
             "no odd-prime pair <= " + std::to_string(limit) + " admits an odd multiplier >= 3");

    // every tuple of distinct primes in [5, 100], sizes 1..6
    std::vector<u64> ps;
    for (u64 p : sieve_primes(100))
        if (p >= 5) ps.push_back(p);
    bool mod3_ok = true;
    u64 tuples = 0;
    std::vector<u64> tuple;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (!tuple.empty()) {
            ++tuples;
            if (!mod3_obstruction_check(tuple)) mod3_ok = false;
        }
        if (tuple.size() == 6 || !mod3_ok) return;
        for (size_t i = start; i < ps.size(); ++i) {
            tuple.push_back(ps[i]);
            self(self, i + 1);
            tuple.pop_back();
        }
    };
    rec(rec, 0);
    out.line("thm11.mod3_obstruction", mod3_ok,
             std::to_string(tuples) + " tuples of distinct primes in [5;100] all blocked mod 3");

    // phi/S2 ratio agrees with the totient quotient on odd squarefree n
    bool ratio_ok = true;
    for (u64 n = 3; n <= 3000 && ratio_ok; n += 2) {
        Factorization f = factorize(n);
        if (!is_squarefree(f)) continue;
        Rational r = ratio_phi_over_s2(f);
        ratio_ok = r == make_rational(to_big(euler_phi(f)), to_big(schemmel_s2(f)));
    }
    out.line("thm11.ratio_matches_totients", ratio_ok,
             "prod (p-1)/(p-2) = phi/S2 on odd squarefree n <= 3000");

    // the multiplier must stay strictly below the ratio; equality fails
    out.line("thm11.ratio_strictness",
             ratio_exceeds(factorize(15), 2) && !ratio_exceeds(factorize(15), 3) &&
                 !ratio_exceeds(factorize(3), 2),
             "phi/S2 > M is strict: 8/3 > 2, 8/3 < 3, and 2/1 = 2 fails");
    return out.all_pass ? kOk : 1;
}

int verify_nielsen(u64 instances, Format fmt) {
    CheckPrinter out{fmt};

    out.line("nielsen.bound_small_values",
             nielsen_bound(1, 1) == 2 && nielsen_bound(1, 2) == 12 && nielsen_bound(2, 2) == 72,
             "(a+1)^(2^r) - (a+1)^(2^(r-1)) at (1,1), (1,2), (2,2)");

    BigNat b7 = deaconescu_upper_bound(7);
    BigNat expect7 = (BigInt(1) << 135) - (BigInt(1) << 71);
    out.line("nielsen.upper_bound_k7", b7 == expect7 && deaconescu_upper_bound(1) == 4 &&
                                           deaconescu_upper_bound(2) == 48,
             "2^135 - 2^71 and the K = 1, 2 values check out");

    // random instances of the hypothesis imply the conclusion
    std::mt19937_64 rng(0x5eed0001);
    u64 tested = 0;
    bool prop_ok = true;
    while (tested < 1000 && prop_ok) {
        u32 r = (u32)(rng() % 6) + 1;
        std::set<u64> xset;
        while (xset.size() < r) xset.insert(2 + rng() % 49);  // distinct, in [2, 50]
        std::vector<u64> xs(xset.begin(), xset.end());
        u64 a = 1 + rng() % 5;
        // integer b window for prod <= a/b < prod_{j<r}
        Rational lower(1), upper(1);
        for (u32 j = 0; j < r; ++j) lower *= make_rational(to_big(xs[j] - 1), to_big(xs[j]));
        for (u32 j = 0; j + 1 < r; ++j) upper *= make_rational(to_big(xs[j] - 1), to_big(xs[j]));
        BigInt b_hi = (to_big(a) * lower.get_den()) / lower.get_num();
        BigInt b_lo = (to_big(a) * upper.get_den()) / upper.get_num() + 1;
        if (b_lo > b_hi || !b_hi.fits_ulong_p()) continue;
        u64 b = mpz_get_ui(b_hi.get_mpz_t());
        if (!nielsen_precondition(xs, a, b)) {
            prop_ok = false;
            break;
        }
        BigInt prod(1);
        for (u64 xj : xs) prod *= to_big(xj);
        if (to_big(a) * prod > nielsen_bound(a, r)) prop_ok = false;
        ++tested;
    }
    out.line("nielsen.hypothesis_implies_bound", prop_ok,
             std::to_string(tested) + " random instances satisfy a*prod(x) <= bound(a,r)");

    // replay the upper-bound argument on random odd squarefree n
    std::vector<u64> primes_1000;
    for (u64 p : sieve_primes(1000))
        if (p != 2) primes_1000.push_back(p);
    std::mt19937_64 rng2(0x5eed0002);
    u64 done = 0;
    bool inst_ok = true;
    while (done < instances && inst_ok) {
        u32 k = (u32)(rng2() % 6) + 2;
        std::vector<u64> chosen;
        while (chosen.size() < k) {
            u64 p = primes_1000[rng2() % primes_1000.size()];
            if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
        }
        std::sort(chosen.begin(), chosen.end());
        Factorization f;
        f.value = 1;
        bool fits = true;
        for (u64 p : chosen) {
            if (__builtin_mul_overflow(f.value, p, &f.value)) {
                fits = false;
                break;
            }
            f.factors.push_back({p, 1});
        }
        if (!fits) continue;
        u64 phi = euler_phi(f), s2 = schemmel_s2(f);
        if (!verify_nielsen_instance(f, phi - 1, s2)) inst_ok = false;
        ++done;
    }
    out.line("nielsen.instance_replay", inst_ok,
             std::to_string(done) + " random odd squarefree n pass the sandwich and bound");

    // the residue S = M^d * P(-1/M), checked against exact rational evaluation
    std::mt19937_64 rng3(0x5eed0003);
    bool residue_ok = true;
    for (int t = 0; t < 500 && residue_ok; ++t) {
        u32 d = (u32)(rng3() % 6) + 1;
        std::vector<int64_t> coeffs;
        for (u32 j = 0; j < d; ++j) coeffs.push_back((int64_t)(rng3() % 21) - 10);
        u64 m = 3 + 2 * (rng3() % 49);
        BigInt s = poly_residue(coeffs, m);
        Rational x = make_rational(BigInt(-1), to_big(m));  // -1/M
        Rational acc(1);                                    // monic leading term
        for (u32 j = 0; j < d; ++j) acc = acc * x + Rational(BigInt((long)coeffs[j]));
        BigInt mpow;
        mpz_ui_pow_ui(mpow.get_mpz_t(), (unsigned long)m, d);
        Rational rhs = acc * Rational(mpow);
        residue_ok = rhs.get_den() == 1 && rhs.get_num() == s;
    }
    out.line("nielsen.residue_identity", residue_ok,
             "500 random monic polynomials agree with M^d * P(-1/M)");
    return out.all_pass ? kOk : 1;
}

int run_verify(const std::string& suite, u64 limit, Format fmt) {
    if (suite == "oracle") return verify_oracle(limit ? limit : 10'000, fmt);
    if (suite == "lemma21") return verify_lemma21(limit ? limit : 100'000, fmt);
    if (suite == "thm11") return verify_thm11(limit ? limit : 10'000, fmt);
    if (suite == "nielsen") return verify_nielsen(limit ? limit : 100, fmt);
    throw std::invalid_argument("unknown verify suite: " + suite +
                                " (expected lemma21, thm11, nielsen or oracle)");
}

// --- scan / search / resume ----------------------------------------------------

void print_report(const SearchReport& r, Format fmt) {
    switch (fmt) {
        case Format::human:
            std::printf("examined=%" PRIu64 " pruned_ratio=%" PRIu64 " pruned_bound=%" PRIu64
                        " pruned_mod3=%" PRIu64 " witnesses=%zu lehmer_witnesses=%zu"
                        " elapsed=%.3fs cursor=%s\n",
                        r.examined, r.pruned_ratio, r.pruned_bound, r.pruned_mod3,
                        r.witnesses.size(), r.lehmer_witnesses.size(), r.elapsed_seconds,
                        r.cursor.c_str());
            for (const auto& w : r.witnesses)
                std::printf("witness: %s\n", record_to_json(w).c_str());
            for (const auto& w : r.lehmer_witnesses)
                std::printf("lehmer witness: %s\n", record_to_json(w).c_str());
            break;
        case Format::json:
            std::printf("%s\n", report_to_json(r).c_str());
            break;
        case Format::csv:
            std::printf("examined,pruned_ratio,pruned_bound,pruned_mod3,witnesses,"
                        "lehmer_witnesses,elapsed_seconds,cursor\n");
            std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%zu,%zu,%.6f,%s\n",
                        r.examined, r.pruned_ratio, r.pruned_bound, r.pruned_mod3,
                        r.witnesses.size(), r.lehmer_witnesses.size(), r.elapsed_seconds,
                        r.cursor.c_str());
            break;
    }
}

int finish_search(const SearchReport& rep, Format fmt) {
    print_report(rep, fmt);
    return (rep.witnesses.empty() && rep.lehmer_witnesses.empty()) ? kOk : kWitness;
}

struct ScanArgs {
    std::string limit = "10000000";
    std::string checkpoint;
    u64 checkpoint_every = 1'000'000;
    std::string records;
    u64 stop_after = 0;
};

struct SearchArgs {
    std::string k = "2:7";
    std::string m = "3,5,7";
    std::string pool = "100000";
    std::string n_cap = "1e18";
    std::string checkpoint;
    u64 checkpoint_every = 1'000'000;
    u64 stop_after = 0;
};

SearchConfig scan_config(const ScanArgs& a, u32 workers) {
    SearchConfig cfg;
    cfg.mode = SearchMode::exhaustive;
    cfg.limit = parse_u64(a.limit);
    cfg.worker_count = workers;
    if (!a.checkpoint.empty()) cfg.checkpoint_path = a.checkpoint;
    cfg.checkpoint_every = a.checkpoint_every;
    if (a.stop_after) cfg.stop_after = a.stop_after;
    cfg.memory_budget = memory_budget_from_env();
    return cfg;
}

SearchConfig search_config(const SearchArgs& a, u32 workers) {
    SearchConfig cfg;
    cfg.mode = SearchMode::dfs;
    auto colon = a.k.find(':');
    if (colon == std::string::npos) {
        cfg.k_lo = cfg.k_hi = (u32)parse_u64(a.k);
    } else {
        cfg.k_lo = (u32)parse_u64(a.k.substr(0, colon));
        cfg.k_hi = (u32)parse_u64(a.k.substr(colon + 1));
    }
    cfg.m_candidates.clear();
    if (a.m != "all") {
        std::stringstream ss(a.m);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.m_candidates.push_back(parse_u64(tok));
    }
    cfg.prime_pool_limit = parse_u64(a.pool);
    cfg.n_cap = parse_big(a.n_cap);
    cfg.worker_count = workers;
    if (!a.checkpoint.empty()) cfg.checkpoint_path = a.checkpoint;
    cfg.checkpoint_every = a.checkpoint_every;
    if (a.stop_after) cfg.stop_after = a.stop_after;
    cfg.memory_budget = memory_budget_from_env();
    return cfg;
}

// Streaming sink for --records: JSON lines to a file or stdout ("-").
struct RecordWriter {
    std::ofstream file;
    bool to_stdout = false;

    RecordSink open(const std::string& path) {
        if (path.empty()) return {};
        if (path == "-") {
            to_stdout = true;
        } else {
            file.open(path, std::ios::trunc);
            if (!file) throw std::invalid_argument("cannot open records file: " + path);
        }
        return [this](const ClassificationRecord& r) {
            if (to_stdout)
                std::printf("%s\n", record_to_json(r).c_str());
            else
                file << record_to_json(r) << "\n";
        };
    }
};

int run_scan(const ScanArgs& args, u32 workers, Format fmt) {
    SearchConfig cfg = scan_config(args, workers);
    RecordWriter writer;
    RecordSink sink = writer.open(args.records);
    return finish_search(sieve_scan(cfg, sink), fmt);
}

int run_search(const SearchArgs& args, u32 workers, Format fmt) {
    return finish_search(dfs_search(search_config(args, workers)), fmt);
}

int run_resume(const std::string& checkpoint_file, const ScanArgs& scan_args,
               const SearchArgs& search_args, u32 workers, Format fmt) {
    std::ifstream in(checkpoint_file);
    if (!in) throw CheckpointError("cannot read checkpoint file: " + checkpoint_file);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string token = buf.str();

    // Mode comes from the token; flags rebuild the matching config.
    bool dfs = token.find("\"mode\":\"dfs\"") != std::string::npos;
    SearchConfig cfg = dfs ? search_config(search_args, workers) : scan_config(scan_args, workers);
    if (cfg.checkpoint_path && *cfg.checkpoint_path == checkpoint_file) {
        // keep writing progress to the same file
    } else if (!cfg.checkpoint_path) {
        cfg.checkpoint_path = checkpoint_file;
    }
    return finish_search(resume(token, cfg), fmt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schemmel totient S2, the divisibility M*S2(n) = phi(n)-1, and a "
                 "counterexample search over composite n"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file (flags override file values)");

    std::string format = "human";
    u32 workers = 1;
    app.add_option("--format", format, "output format: human, json or csv")
        ->capture_default_str();
    app.add_option("--workers", workers, "worker thread count")->capture_default_str();

    std::string n_str, suite, k_str;
    u64 verify_limit = 0;

    auto* cmd_totient = app.add_subcommand("totient", "phi(n), S2(n), omega(n), squarefree flag");
    cmd_totient->add_option("n", n_str, "n >= 1")->required();
    cmd_totient->fallthrough();

    auto* cmd_check = app.add_subcommand("check", "classification record for one n");
    cmd_check->add_option("n", n_str, "n >= 2")->required();
    cmd_check->fallthrough();

    auto* cmd_bound = app.add_subcommand("bound", "upper bound for omega(n) = K solutions");
    cmd_bound->add_option("K", k_str, "K >= 1")->required();
    cmd_bound->fallthrough();

    auto* cmd_verify = app.add_subcommand("verify", "machine-check a suite of known facts");
    cmd_verify->add_option("suite", suite, "lemma21, thm11, nielsen or oracle")->required();
    cmd_verify->add_option("--limit", verify_limit, "suite-specific scan limit / instance count");
    cmd_verify->fallthrough();

    ScanArgs scan_args;
    auto* cmd_scan = app.add_subcommand("scan", "exhaustive sieve scan of [2, limit]");
    cmd_scan->add_option("--limit", scan_args.limit, "scan everything up to this n")
        ->capture_default_str();
    cmd_scan->add_option("--checkpoint", scan_args.checkpoint, "checkpoint file path");
    cmd_scan->add_option("--checkpoint-every", scan_args.checkpoint_every,
                         "records between checkpoint writes")
        ->capture_default_str();
    cmd_scan->add_option("--records", scan_args.records,
                         "stream every record as a JSON line to this file ('-' = stdout)");
    cmd_scan->add_option("--stop-after", scan_args.stop_after,
                         "stop at the next unit boundary after this many records");
    cmd_scan->fallthrough();

    SearchArgs search_args;
    auto* cmd_search = app.add_subcommand("search", "pruned DFS over odd prime tuples");
    cmd_search->add_option("--k", search_args.k, "omega range, LO:HI or a single K")
        ->capture_default_str();
    cmd_search->add_option("--m", search_args.m, "multiplier candidates, comma list or 'all'")
        ->capture_default_str();
    cmd_search->add_option("--pool", search_args.pool, "prime pool limit")->capture_default_str();
    cmd_search->add_option("--n-cap", search_args.n_cap, "product cap (decimal, XeY or 2^N)")
        ->capture_default_str();
    cmd_search->add_option("--checkpoint", search_args.checkpoint, "checkpoint file path");
    cmd_search->add_option("--checkpoint-every", search_args.checkpoint_every,
                           "records between checkpoint writes")
        ->capture_default_str();
    cmd_search->add_option("--stop-after", search_args.stop_after,
                           "stop at the next unit boundary after this many records");
    cmd_search->fallthrough();

    std::string resume_file;
    auto* cmd_resume = app.add_subcommand("resume", "continue a checkpointed scan or search");
    cmd_resume->add_option("--checkpoint", resume_file, "checkpoint file")->required();
    cmd_resume->add_option("--limit", scan_args.limit, "scan limit of the original run");
    cmd_resume->add_option("--k", search_args.k, "omega range of the original run");
    cmd_resume->add_option("--m", search_args.m, "multiplier candidates of the original run");
    cmd_resume->add_option("--pool", search_args.pool, "prime pool of the original run");
    cmd_resume->add_option("--n-cap", search_args.n_cap, "product cap of the original run");
    cmd_resume->add_option("--stop-after", scan_args.stop_after, "interrupt again after N records");
    cmd_resume->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        Format fmt = parse_format(format);
        if (workers < 1) throw std::invalid_argument("--workers must be >= 1");
        if (*cmd_totient) {
            u64 n = parse_u64(n_str);
            if (n < 1) throw std::invalid_argument("totient: n must be >= 1");
            return run_totient(n, fmt);
        }
        if (*cmd_check) return run_check(parse_u64(n_str), fmt);
        if (*cmd_bound) {
            u64 k = parse_u64(k_str);
            if (k < 1) throw std::invalid_argument("bound: K must be >= 1");
            return run_bound((u32)k, fmt);
        }
        if (*cmd_verify) return run_verify(suite, verify_limit, fmt);
        if (*cmd_scan) return run_scan(scan_args, workers, fmt);
        if (*cmd_search) return run_search(search_args, workers, fmt);
        if (*cmd_resume) {
            search_args.stop_after = scan_args.stop_after;
            return run_resume(resume_file, scan_args, search_args, workers, fmt);
        }
        return kUsage;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return kBudget;
    } catch (const OverflowError& e) {
        std::fprintf(stderr, "overflow: %s\n", e.what());
        return kBudget;
    } catch (const CheckpointError& e) {
        std::fprintf(stderr, "checkpoint error: %s\n", e.what());
        return kCheckpoint;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
