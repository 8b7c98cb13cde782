#include "deacon/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "deacon/bounds.hpp"
#include "json.hpp"

namespace deacon {

namespace {

using nlohmann::json;

constexpr u64 kChunkSize = 65536;  // n-range width of one exhaustive work unit
constexpr int kCheckpointVersion = 1;

u64 isqrt_u64(u64 n) {
    u64 r = (u64)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(u64 v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

}  // namespace

void SearchConfig::validate() const {
    if (worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
    if (checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
    if (mode == SearchMode::exhaustive) {
        if (limit < 2) throw std::invalid_argument("scan limit must be >= 2");
    } else {
        if (k_lo < 2) throw std::invalid_argument("k range must start at 2 or above");
        if (k_hi < k_lo) throw std::invalid_argument("k range must be non-empty");
        if (k_hi > kDefaultExponentBudgetLog2)
            throw std::invalid_argument("k range exceeds the exponent budget");
        if (prime_pool_limit < 3) throw std::invalid_argument("prime pool must reach at least 3");
        if (n_cap < 2) throw std::invalid_argument("n_cap must be >= 2");
        for (u64 m : m_candidates)
            if (m < 3 || m % 2 == 0)
                throw std::invalid_argument("multiplier candidates must be odd and >= 3");
    }
}

std::string SearchConfig::canonical_string() const {
    std::ostringstream os;
    if (mode == SearchMode::exhaustive) {
        os << "mode=exhaustive;limit=" << limit;
    } else {
        os << "mode=dfs;k=" << k_lo << ":" << k_hi << ";m=";
        if (m_candidates.empty()) {
            os << "all";
        } else {
            std::vector<u64> ms = m_candidates;
            std::sort(ms.begin(), ms.end());
            for (size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms[i];
        }
        os << ";ncap=" << n_cap.get_str() << ";pool=" << prime_pool_limit;
    }
    return os.str();
}

std::string SearchConfig::config_hash() const { return hex64(fnv1a(canonical_string())); }

SearchReport merge_reports(SearchReport a, const SearchReport& b) {
    a.examined += b.examined;
    a.pruned_ratio += b.pruned_ratio;
    a.pruned_bound += b.pruned_bound;
    a.pruned_mod3 += b.pruned_mod3;
    a.witnesses.insert(a.witnesses.end(), b.witnesses.begin(), b.witnesses.end());
    a.lehmer_witnesses.insert(a.lehmer_witnesses.end(), b.lehmer_witnesses.begin(),
                              b.lehmer_witnesses.end());
    auto by_n = [](const ClassificationRecord& x, const ClassificationRecord& y) { return x.n < y.n; };
    std::sort(a.witnesses.begin(), a.witnesses.end(), by_n);
    std::sort(a.lehmer_witnesses.begin(), a.lehmer_witnesses.end(), by_n);
    a.elapsed_seconds += b.elapsed_seconds;
    a.cursor = std::max(a.cursor, b.cursor);
    return a;
}

std::string report_to_json(const SearchReport& r, bool include_elapsed) {
    std::ostringstream os;
    os << "{\"examined\":" << r.examined << ",\"pruned_ratio\":" << r.pruned_ratio
       << ",\"pruned_bound\":" << r.pruned_bound << ",\"pruned_mod3\":" << r.pruned_mod3
       << ",\"witnesses\":[";
    for (size_t i = 0; i < r.witnesses.size(); ++i)
        os << (i ? "," : "") << record_to_json(r.witnesses[i]);
    os << "],\"lehmer_witnesses\":[";
    for (size_t i = 0; i < r.lehmer_witnesses.size(); ++i)
        os << (i ? "," : "") << record_to_json(r.lehmer_witnesses[i]);
    os << "]";
    if (include_elapsed) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", r.elapsed_seconds);
        os << ",\"elapsed_seconds\":" << buf;
    }
    os << ",\"cursor\":\"" << r.cursor << "\"}";
    return os.str();
}

// ---------------------------------------------------------------------------
// segmented classification
// ---------------------------------------------------------------------------

namespace {

// phi/s2 for [lo, hi] by sieving the base primes over the segment and
// dividing them out of each residual; whatever survives above sqrt(hi) is a
// single prime factor.
struct Segment {
    std::vector<u64> rem, phi, s2;

    void classify(u64 lo, u64 hi, const std::vector<u64>& base,
                  const std::function<void(u64 n, u64 phi, u64 s2, bool prime)>& emit) {
        size_t len = (size_t)(hi - lo + 1);
        rem.resize(len);
        phi.assign(len, 1);
        s2.assign(len, 1);
        for (size_t i = 0; i < len; ++i) rem[i] = lo + i;
        for (u64 p : base) {
            if (p * p > hi) break;
            for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
                size_t i = (size_t)(m - lo);
                u64 pe = 1;  // p^(e-1)
                rem[i] /= p;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    pe *= p;
                }
                phi[i] *= pe * (p - 1);
                s2[i] *= pe * (p - 2);
            }
        }
        for (size_t i = 0; i < len; ++i) {
            u64 n = lo + i;
            if (rem[i] > 1) {
                phi[i] *= rem[i] - 1;
                s2[i] *= rem[i] - 2;
            }
            emit(n, phi[i], s2[i], phi[i] == n - 1);
        }
    }
};

}  // namespace

void classify_range(u64 lo, u64 hi, const RecordSink& sink, u64 memory_budget) {
    if (lo < 2 || lo > hi) throw std::invalid_argument("classify_range: need 2 <= lo <= hi");
    std::vector<u64> base = sieve_primes(isqrt_u64(hi), memory_budget);
    Segment seg;
    for (u64 start = lo; start <= hi;) {
        u64 end = std::min(hi, start + kChunkSize - 1);
        seg.classify(start, end, base, [&](u64 n, u64 phi, u64 s2, bool prime) {
            sink(classify_from_values(n, phi, s2, prime));
        });
        if (end == hi) break;
        start = end + 1;
    }
}

std::vector<ClassificationRecord> classify_range(u64 lo, u64 hi, u64 memory_budget) {
    std::vector<ClassificationRecord> out;
    out.reserve((size_t)std::min<u64>(hi - lo + 1, 1u << 22));
    classify_range(lo, hi, [&](const ClassificationRecord& r) { out.push_back(r); }, memory_budget);
    return out;
}

// ---------------------------------------------------------------------------
// generic deterministic unit runner
// ---------------------------------------------------------------------------

namespace {

struct UnitResult {
    SearchReport rep;
    std::vector<ClassificationRecord> records;  // only filled when streaming
};

void write_checkpoint(const SearchConfig& cfg, const std::string& cursor, const SearchReport& acc) {
    if (!cfg.checkpoint_path) return;
    json j;
    j["version"] = kCheckpointVersion;
    j["config_hash"] = cfg.config_hash();
    j["mode"] = cfg.mode == SearchMode::exhaustive ? "exhaustive" : "dfs";
    j["cursor"] = cursor;
    j["examined"] = acc.examined;
    j["pruned_ratio"] = acc.pruned_ratio;
    j["pruned_bound"] = acc.pruned_bound;
    j["pruned_mod3"] = acc.pruned_mod3;
    j["witnesses"] = json::array();
    for (const auto& w : acc.witnesses) j["witnesses"].push_back(json::parse(record_to_json(w)));
    j["lehmer_witnesses"] = json::array();
    for (const auto& w : acc.lehmer_witnesses)
        j["lehmer_witnesses"].push_back(json::parse(record_to_json(w)));

    std::string tmp = *cfg.checkpoint_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint file " + tmp);
        out << j.dump() << "\n";
    }
    if (std::rename(tmp.c_str(), cfg.checkpoint_path->c_str()) != 0)
        throw CheckpointError("cannot rename checkpoint into place: " + *cfg.checkpoint_path);
}

// Units are processed in rounds of worker_count threads and merged strictly
// in unit order, so reports and checkpoints never depend on scheduling.
SearchReport run_units(const SearchConfig& cfg, u64 unit_begin, u64 unit_end,
                       const std::function<UnitResult(u64)>& process,
                       const std::function<std::string(u64)>& cursor_at, SearchReport acc,
                       const RecordSink& sink, std::chrono::steady_clock::time_point t0) {
    auto finish = [&](SearchReport r, const std::string& cursor, bool checkpoint) {
        r.cursor = cursor;
        r.elapsed_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (checkpoint) write_checkpoint(cfg, cursor, r);
        return r;
    };

    if (cfg.stop_after && acc.examined >= *cfg.stop_after && unit_begin < unit_end)
        return finish(std::move(acc), cursor_at(unit_begin), true);

    u64 since_checkpoint = 0;
    u64 width = std::max<u32>(cfg.worker_count, 1);
    std::vector<UnitResult> results((size_t)width);
    std::vector<std::exception_ptr> errors((size_t)width);

    for (u64 u = unit_begin; u < unit_end; u += width) {
        u64 round = std::min(width, unit_end - u);
        if (round == 1) {
            results[0] = process(u);
        } else {
            std::vector<std::thread> threads;
            threads.reserve((size_t)round);
            for (u64 t = 0; t < round; ++t) {
                threads.emplace_back([&, t] {
                    try {
                        results[(size_t)t] = process(u + t);
                    } catch (...) {
                        errors[(size_t)t] = std::current_exception();
                    }
                });
            }
            for (auto& th : threads) th.join();
            for (u64 t = 0; t < round; ++t)
                if (errors[(size_t)t]) std::rethrow_exception(errors[(size_t)t]);
        }

        for (u64 t = 0; t < round; ++t) {
            UnitResult& res = results[(size_t)t];
            if (sink)
                for (const auto& rec : res.records) sink(rec);
            since_checkpoint += res.rep.examined;
            acc = merge_reports(std::move(acc), res.rep);
            acc.cursor.clear();
            res = UnitResult{};
            if (cfg.stop_after && acc.examined >= *cfg.stop_after && u + t + 1 < unit_end)
                return finish(std::move(acc), cursor_at(u + t + 1), true);
        }
        if (cfg.checkpoint_path && since_checkpoint >= cfg.checkpoint_every && u + round < unit_end) {
            write_checkpoint(cfg, cursor_at(u + round), acc);
            since_checkpoint = 0;
        }
    }
    return finish(std::move(acc), "done", true);
}

}  // namespace

// ---------------------------------------------------------------------------
// exhaustive scan
// ---------------------------------------------------------------------------

namespace {

SearchReport scan_from(const SearchConfig& cfg, u64 start_n, SearchReport base,
                       const RecordSink& sink) {
    auto t0 = std::chrono::steady_clock::now();
    u64 limit = cfg.limit;
    bool use_tables = limit < UINT32_MAX && (limit + 1) * 12 <= cfg.memory_budget;
    std::optional<TotientTables> tables;
    std::vector<u64> base_primes;
    if (use_tables)
        tables.emplace(TotientTables::build(limit, cfg.memory_budget));
    else
        base_primes = sieve_primes(isqrt_u64(limit), cfg.memory_budget);

    u64 first_chunk = start_n / kChunkSize;
    u64 last_chunk = limit / kChunkSize;

    auto handle = [](UnitResult& out, bool streaming, u64 n, u64 phi, u64 s2, bool prime) {
        ++out.rep.examined;
        if (!prime) {
            if ((n - 1) % phi == 0)
                out.rep.lehmer_witnesses.push_back(classify_from_values(n, phi, s2, false));
            if (s2 > 0 && (phi - 1) % s2 == 0)
                out.rep.witnesses.push_back(classify_from_values(n, phi, s2, false));
        }
        if (streaming) out.records.push_back(classify_from_values(n, phi, s2, prime));
    };

    bool streaming = (bool)sink;
    auto process = [&](u64 c) {
        UnitResult out;
        u64 lo = std::max<u64>({2, c * kChunkSize, start_n});
        u64 hi = std::min(limit, (c + 1) * kChunkSize - 1);
        if (lo > hi) return out;
        if (use_tables) {
            const TotientTables& t = *tables;
            for (u64 n = lo; n <= hi; ++n)
                handle(out, streaming, n, t.phi[n], t.s2[n], t.spf[n] == n);
        } else {
            Segment seg;
            seg.classify(lo, hi, base_primes, [&](u64 n, u64 phi, u64 s2, bool prime) {
                handle(out, streaming, n, phi, s2, prime);
            });
        }
        return out;
    };
    auto cursor_at = [&](u64 c) {
        u64 next = std::max<u64>(2, c * kChunkSize);
        return next > limit ? std::string("done") : "n=" + std::to_string(next);
    };
    return run_units(cfg, first_chunk, last_chunk + 1, process, cursor_at, std::move(base), sink,
                     t0);
}

}  // namespace

SearchReport sieve_scan(const SearchConfig& config, const RecordSink& sink) {
    SearchConfig cfg = config;
    cfg.mode = SearchMode::exhaustive;
    cfg.validate();
    return scan_from(cfg, 2, SearchReport{}, sink);
}

// ---------------------------------------------------------------------------
// pruned DFS over odd prime tuples
// ---------------------------------------------------------------------------

namespace {

struct DfsContext {
    const std::vector<u64>& pool;  // odd primes, ascending; shared, immutable
    const std::vector<u64>& mset;  // sorted candidate multipliers; empty = all odd >= 3
    u32 k;
    const BigInt& cap;             // min(n_cap, deaconescu_upper_bound(k))
    const DfsHooks* hooks;
};

// Largest achievable phi/s2 ratio extension using the `need` smallest pool
// primes after index `from`, as an unreduced fraction num/den.
void extension_ratio(const DfsContext& c, size_t from, u32 need, BigInt& num, BigInt& den) {
    num = 1;
    den = 1;
    for (size_t j = from; j < from + need; ++j) {
        num *= to_big(c.pool[j] - 1);
        den *= to_big(c.pool[j] - 2);
    }
}

ClassificationRecord record_from_big(const BigInt& n, const BigInt& phi, const BigInt& s2) {
    if (!n.fits_ulong_p() || !phi.fits_ulong_p() || !s2.fits_ulong_p())
        throw OverflowError("witness beyond 64-bit range: n = " + n.get_str());
    return classify_from_values(mpz_get_ui(n.get_mpz_t()), mpz_get_ui(phi.get_mpz_t()),
                                mpz_get_ui(s2.get_mpz_t()), false);
}

// Visit the node formed by appending pool[i] at 1-based depth `depth`.
// product/phi/s2 are running exact products over the tuple so far.
void dfs_node(const DfsContext& c, UnitResult& out, std::vector<u64>& tuple, const BigInt& product,
              const BigInt& phi, const BigInt& s2, size_t i, u32 depth) {
    u64 p = c.pool[i];
    BigInt prod2 = product * to_big(p);
    BigInt phi2 = phi * to_big(p - 1);
    BigInt s22 = s2 * to_big(p - 2);
    tuple.push_back(p);
    auto note = [&](DfsHooks::Node verdict) {
        if (c.hooks && c.hooks->on_node) c.hooks->on_node(tuple, verdict);
    };

    for (;;) {  // single pass; break = this node is done
        // bound cut: the partial product alone already reaches the cap
        if (prod2 >= c.cap) {
            ++out.rep.pruned_bound;
            note(DfsHooks::Node::cut_bound);
            break;
        }

        // ratio cut: even the best extension (the next `need` pool primes)
        // keeps phi/s2 at or below every candidate multiplier. A witness
        // needs M < phi/s2 strictly, so nothing below can qualify.
        u32 need = c.k - depth;
        BigInt ext_num, ext_den;
        extension_ratio(c, i + 1, need, ext_num, ext_den);
        BigInt rmax_num = phi2 * ext_num;
        BigInt rmax_den = s22 * ext_den;
        auto admissible = [&](u64 m) { return rmax_num > to_big(m) * rmax_den; };
        bool any, only3;
        if (c.mset.empty()) {
            any = admissible(3);
            only3 = any && !admissible(5);
        } else {
            any = false;
            bool non3 = false;
            for (u64 m : c.mset) {
                if (!admissible(m)) break;  // mset sorted, admissibility is downward closed
                any = true;
                if (m != 3) non3 = true;
            }
            only3 = any && !non3;
        }
        if (!any) {
            ++out.rep.pruned_ratio;
            note(DfsHooks::Node::cut_ratio);
            break;
        }

        // mod-3 cut: p_1 = 3 and M = 3 force 3 prod(p_i - 2) =
        // 2 prod(p_i - 1) - 1 over the remaining primes, unsolvable mod 3.
        if (tuple.front() == 3 && only3) {
            ++out.rep.pruned_mod3;
            note(DfsHooks::Node::cut_mod3);
            break;
        }

        if (depth == c.k) {
            ++out.rep.examined;
            note(DfsHooks::Node::leaf_examined);
            BigInt phi_minus1 = phi2 - 1;
            if (mpz_divisible_p(phi_minus1.get_mpz_t(), s22.get_mpz_t())) {
                BigInt m = phi_minus1 / s22;
                bool wanted = c.mset.empty() ||
                              (m.fits_ulong_p() &&
                               std::binary_search(c.mset.begin(), c.mset.end(),
                                                  (u64)mpz_get_ui(m.get_mpz_t())));
                if (wanted) out.rep.witnesses.push_back(record_from_big(prod2, phi2, s22));
            }
            if (mpz_divisible_p(BigInt(prod2 - 1).get_mpz_t(), phi2.get_mpz_t()))
                out.rep.lehmer_witnesses.push_back(record_from_big(prod2, phi2, s22));
            break;
        }

        note(DfsHooks::Node::descended);
        u32 need_after_child = c.k - depth - 1;
        for (size_t j = i + 1; j + need_after_child < c.pool.size(); ++j)
            dfs_node(c, out, tuple, prod2, phi2, s22, j, depth + 1);
        break;
    }
    tuple.pop_back();
}

SearchReport dfs_from(const SearchConfig& cfg, u64 start_unit, SearchReport base,
                      const DfsHooks& hooks) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<u64> pool;
    for (u64 p : sieve_primes(cfg.prime_pool_limit, cfg.memory_budget))
        if (p != 2) pool.push_back(p);

    std::vector<u64> mset = cfg.m_candidates;
    std::sort(mset.begin(), mset.end());

    // unit u = (K, first-prime index), K ascending then index ascending
    struct Unit {
        u32 k;
        u32 i0;
    };
    std::vector<Unit> units;
    std::vector<BigInt> caps(cfg.k_hi + 1);
    for (u32 k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        caps[k] = std::min(BigInt(cfg.n_cap), deaconescu_upper_bound(k));
        if (pool.size() < k) continue;
        for (u32 i0 = 0; i0 + k <= pool.size(); ++i0) units.push_back({k, i0});
    }

    auto process = [&](u64 u) {
        const Unit& unit = units[(size_t)u];
        DfsContext ctx{pool, mset, unit.k, caps[unit.k], &hooks};
        UnitResult out;
        std::vector<u64> tuple;
        dfs_node(ctx, out, tuple, BigInt(1), BigInt(1), BigInt(1), unit.i0, 1);
        return out;
    };
    auto cursor_at = [&](u64 u) {
        return u >= units.size() ? std::string("done") : "unit=" + std::to_string(u);
    };
    return run_units(cfg, start_unit, units.size(), process, cursor_at, std::move(base), {}, t0);
}

}  // namespace

SearchReport dfs_search(const SearchConfig& config, const DfsHooks& hooks) {
    SearchConfig cfg = config;
    cfg.mode = SearchMode::dfs;
    cfg.validate();
    return dfs_from(cfg, 0, SearchReport{}, hooks);
}

SearchReport dfs_search(const SearchConfig& config) { return dfs_search(config, DfsHooks{}); }

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

namespace {

ClassificationRecord record_from_node(const json& j) {
    ClassificationRecord r;
    r.n = j.at("n").get<u64>();
    r.phi = j.at("phi").get<u64>();
    r.s2 = j.at("s2").get<u64>();
    r.is_prime = j.at("is_prime").get<bool>();
    r.is_lehmer = j.at("is_lehmer").get<bool>();
    r.is_deaconescu = j.at("is_deaconescu").get<bool>();
    if (!j.at("multiplier").is_null()) r.multiplier = j.at("multiplier").get<u64>();
    return r;
}

}  // namespace

SearchReport resume(const std::string& checkpoint_json, const SearchConfig& config) {
    config.validate();
    json j;
    try {
        j = json::parse(checkpoint_json);
    } catch (const json::parse_error& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kCheckpointVersion)
            throw CheckpointError("unsupported checkpoint version");
        if (j.at("config_hash").get<std::string>() != config.config_hash())
            throw CheckpointError("checkpoint does not match this configuration");
        std::string mode = j.at("mode").get<std::string>();
        if (mode != (config.mode == SearchMode::exhaustive ? "exhaustive" : "dfs"))
            throw CheckpointError("checkpoint mode does not match this configuration");

        SearchReport base;
        base.examined = j.at("examined").get<u64>();
        base.pruned_ratio = j.at("pruned_ratio").get<u64>();
        base.pruned_bound = j.at("pruned_bound").get<u64>();
        base.pruned_mod3 = j.at("pruned_mod3").get<u64>();
        for (const auto& w : j.at("witnesses")) base.witnesses.push_back(record_from_node(w));
        for (const auto& w : j.at("lehmer_witnesses"))
            base.lehmer_witnesses.push_back(record_from_node(w));

        std::string cursor = j.at("cursor").get<std::string>();
        if (cursor == "done") {
            base.cursor = "done";
            return base;  // nothing left; incremental work is empty
        }
        auto cursor_value = [&](const std::string& prefix) {
            if (cursor.rfind(prefix, 0) != 0) throw CheckpointError("bad cursor: " + cursor);
            try {
                return (u64)std::stoull(cursor.substr(prefix.size()));
            } catch (const std::exception&) {
                throw CheckpointError("bad cursor: " + cursor);
            }
        };
        if (config.mode == SearchMode::exhaustive)
            return scan_from(config, cursor_value("n="), std::move(base), {});
        return dfs_from(config, cursor_value("unit="), std::move(base), DfsHooks{});
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
}

}  // namespace deacon
