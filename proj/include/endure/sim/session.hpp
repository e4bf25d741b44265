#ifndef ENDURE_SIM_SESSION_HPP
#define ENDURE_SIM_SESSION_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "endure/sim/tree.hpp"
#include "endure/workload_bench.hpp"

namespace endure::sim {

struct BuiltTree {
    std::unique_ptr<SimTree> tree;
    std::vector<std::uint64_t> keys;  // unique keys resident after the fill
    std::uint64_t fill_entries = 0;
    std::uint64_t fill_flushes = 0;
};

// Flushes needed to leave every level holding exactly K_i runs from T-1
// arrivals: T^L - 1.
std::uint64_t flushes_to_full(int t, int levels);

// Builds a tree and fills it with (T^L - 1) * flush_capacity unique keys,
// which lands it exactly in the full state the analytical model assumes.
BuiltTree build_full_tree(const LsmDesign& design, const SystemParams& sys,
                          std::uint64_t seed);

struct WorkloadIoStats {
    Workload target;
    std::uint64_t queries = 0;
    std::array<std::uint64_t, 4> counts{};  // executed ops per type
    double empty_get_ios = 0.0;             // mean I/Os per empty point get
    double nonempty_get_ios = 0.0;          // mean I/Os per nonempty point get
    double range_ios = 0.0;                 // mean seeks + f_seq-weighted scan pages
    double write_ios = 0.0;                 // session-amortized maintenance per put
    double ios_per_query = 0.0;
};

struct SessionStats {
    std::vector<WorkloadIoStats> per_workload;
    IoCounters before;
    IoCounters after;
    double amortized_write_ios = 0.0;  // maintenance I/O per put across the session
};

// Executes the session's workloads back to back on the tree. Point reads on
// absent keys come from a disjoint key stream; present-key reads sample the
// provided population; range bounds span an s_rq fraction of the key space;
// puts overwrite existing keys with probability update_fraction and
// otherwise insert fresh unique keys (appended to `keys`).
SessionStats run_session(SimTree& tree, std::vector<std::uint64_t>& keys,
                         const Session& session, std::uint64_t seed,
                         double update_fraction = 0.0);

}  // namespace endure::sim

#endif
