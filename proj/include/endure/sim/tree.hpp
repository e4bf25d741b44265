#ifndef ENDURE_SIM_TREE_HPP
#define ENDURE_SIM_TREE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "endure/cost_model.hpp"
#include "endure/rng.hpp"
#include "endure/sim/bloom.hpp"
#include "endure/types.hpp"

namespace endure::sim {

// Page-level I/O tallies. Reads and writes are raw page counts; sequential
// weighting (f_seq, f_a) is applied by whoever reports, not here.
struct IoCounters {
    std::uint64_t random_reads = 0;      // query-path probes and seeks
    std::uint64_t sequential_reads = 0;  // query-path scan pages after the seek
    std::uint64_t compaction_reads = 0;  // maintenance pages read (merges)
    std::uint64_t compaction_writes = 0; // maintenance pages written (incl. flush output)
    std::uint64_t flushes = 0;
    std::uint64_t compactions = 0;       // full-level merges
    std::uint64_t bloom_probes = 0;
    std::uint64_t bloom_positives = 0;
    std::uint64_t bloom_false_positives = 0;
    std::uint64_t gets_empty = 0;
    std::uint64_t gets_nonempty = 0;
    std::uint64_t range_gets = 0;
    std::uint64_t puts = 0;
};

// In-memory LSM tree that counts the page I/Os a disk-backed tree would
// issue. Writes buffer into a sorted map sized m_buf = m - m_filt; flushes
// cascade down levels. A level accepts T-1 incoming runs, eagerly merged
// into K_i groups (the first (T-1) mod K_i groups take the ceiling share),
// and compacts everything into the next level on the T-th arrival. The last
// design level absorbs: it compacts into itself instead of growing the tree,
// so shadowed duplicates collapse there and capacity-respecting workloads
// stay at the designed depth. Compaction output streams straight into the
// receiving level's merge, so a page is written once per run it lands in.
// Every run carries a Bloom filter sized for its level and an implicit fence
// index (one seek per probed run).
class SimTree {
  public:
    // Requires integral T and K_i; throws ConfigError otherwise.
    SimTree(const LsmDesign& design, const SystemParams& sys, std::uint64_t seed);

    void put(std::uint64_t key, std::uint64_t value);
    std::optional<std::uint64_t> point_get(std::uint64_t key);
    // Inclusive bounds, newest version per key, sorted by key.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> range_get(std::uint64_t lo,
                                                                   std::uint64_t hi);

    const IoCounters& counters() const { return counters_; }
    const LsmDesign& design() const { return design_; }
    const SystemParams& sys() const { return sys_; }
    std::size_t flush_capacity() const { return flush_capacity_; }
    std::size_t buffer_entries() const { return buffer_.size(); }
    // Stored entries including shadowed duplicates.
    std::size_t total_entries() const;
    std::vector<std::size_t> level_run_counts() const;
    int design_levels() const { return design_levels_; }
    double fpr_for_level(int level) const;
    double bits_per_entry_for_level(int level) const;
    // Full logical contents (newest version per key), no I/O charged.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> scan_all() const;

  private:
    struct Run {
        std::vector<std::uint64_t> keys;
        std::vector<std::uint64_t> vals;
        BloomFilter bloom;
    };
    struct Level {
        std::vector<Run> runs;  // newest first
        int arrivals = 0;       // incoming runs since the last full compaction
        int group_index = 0;
        int open_fill = 0;      // arrivals merged into the current open run
    };
    using Entries = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;

    std::size_t pages(std::size_t n) const { return (n + page_entries_ - 1) / page_entries_; }
    int capacity_at(int level) const;
    int group_capacity(int level, int group) const;
    Run make_run(int level, Entries e);
    void flush();
    void receive(int level, Entries incoming);

    LsmDesign design_;
    SystemParams sys_;
    int t_ = 0;
    std::vector<int> k_;
    int design_levels_ = 0;
    double fpr_factor_ = 0.0;  // T^(T/(T-1)) * exp(-(m_filt/N) ln^2 2)
    std::size_t flush_capacity_ = 0;
    std::size_t page_entries_ = 0;
    std::map<std::uint64_t, std::uint64_t> buffer_;
    std::vector<Level> levels_;
    IoCounters counters_;
    SplitMix64 rng_;
};

}  // namespace endure::sim

#endif
