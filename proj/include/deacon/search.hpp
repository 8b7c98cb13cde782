// Counterexample search. Two engines:
//
//   - sieve_scan: exhaustive pass over [2, limit] driven by a linear
//     smallest-prime-factor sieve, flagging any composite with
//     S2(n) | phi(n) - 1 (and any Lehmer composite, phi(n) | n - 1).
//   - dfs_search: depth-first enumeration of strictly increasing odd prime
//     tuples p_1 < ... < p_K, pruned by exact-rational cuts: the multiplier
//     must stay below prod (p_i - 1)/(p_i - 2) (best case: extend with the
//     smallest admissible pool primes), the product must stay below
//     min(n_cap, 2^(2^K + K) - 2^(2^(K-1) + K)), and branches with p_1 = 3
//     whose only admissible multiplier is 3 die to the mod-3 obstruction.
//
// Work is partitioned into deterministic units (n-ranges / first-prime
// prefixes); workers fill private reports which are merged in canonical
// order, so identical configs give byte-identical reports regardless of
// thread interleaving. Checkpoints cover a completed prefix of units and
// are written atomically (temp file + rename).

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deacon/props.hpp"
#include "deacon/rational.hpp"

namespace deacon {

enum class SearchMode { exhaustive, dfs };

struct SearchConfig {
    SearchMode mode = SearchMode::exhaustive;

    // exhaustive
    u64 limit = 10'000'000;

    // dfs
    u32 k_lo = 2;
    u32 k_hi = 7;
    std::vector<u64> m_candidates = {3, 5, 7};  // empty = all odd M >= 3
    BigNat n_cap = BigNat("1000000000000000000");
    u64 prime_pool_limit = 100'000;

    u32 worker_count = 1;
    std::optional<std::string> checkpoint_path;
    u64 checkpoint_every = 1'000'000;  // records between checkpoint writes

    // Cooperative interruption for tests and drivers: stop at the next unit
    // boundary once this many records have been examined. Not part of the
    // config identity.
    std::optional<u64> stop_after;

    u64 memory_budget = kDefaultMemoryBudgetBytes;

    void validate() const;
    std::string canonical_string() const;  // the fields that identify the work
    std::string config_hash() const;       // FNV-1a 64 over canonical_string
};

// Mergeable summary of a scan or DFS. Merging partition reports is a
// commutative monoid: counters add, witness lists concatenate and sort by n,
// cursors max-merge, the empty report is the identity.
struct SearchReport {
    u64 examined = 0;
    u64 pruned_ratio = 0;
    u64 pruned_bound = 0;
    u64 pruned_mod3 = 0;
    std::vector<ClassificationRecord> witnesses;
    std::vector<ClassificationRecord> lehmer_witnesses;
    double elapsed_seconds = 0.0;
    std::string cursor;  // opaque; "done" once the work is exhausted
};

SearchReport merge_reports(SearchReport a, const SearchReport& b);

// One JSON object, fields in declaration order. elapsed_seconds is skipped
// when include_elapsed is false so reports can be compared byte for byte.
std::string report_to_json(const SearchReport& r, bool include_elapsed = true);

using RecordSink = std::function<void(const ClassificationRecord&)>;

// One record per n in [lo, hi], ascending, via a segmented sieve.
void classify_range(u64 lo, u64 hi, const RecordSink& sink,
                    u64 memory_budget = kDefaultMemoryBudgetBytes);
std::vector<ClassificationRecord> classify_range(u64 lo, u64 hi,
                                                 u64 memory_budget = kDefaultMemoryBudgetBytes);

// Exhaustive scan of [2, config.limit]. The optional sink streams every
// classified record in order (costs a per-chunk buffer; leave empty for
// counter-only scans).
SearchReport sieve_scan(const SearchConfig& config, const RecordSink& sink = {});

// Test instrumentation: observes every DFS node visit and the verdict.
// Invoked from worker threads; use worker_count = 1 unless the callback is
// thread-safe.
struct DfsHooks {
    enum class Node { descended, leaf_examined, cut_ratio, cut_bound, cut_mod3 };
    std::function<void(const std::vector<u64>& tuple, Node verdict)> on_node;
};

SearchReport dfs_search(const SearchConfig& config);
SearchReport dfs_search(const SearchConfig& config, const DfsHooks& hooks);

// Continue from a checkpoint produced by a run with an identical config
// identity. Returns the merged report (stored prefix + new work); resuming
// a finished run performs no new work. Throws CheckpointError on version or
// config hash mismatch.
SearchReport resume(const std::string& checkpoint_json, const SearchConfig& config);

}  // namespace deacon
