#include "endure/sim/session.hpp"

#include <algorithm>
#include <cmath>

#include "endure/errors.hpp"
#include "endure/rng.hpp"

namespace endure::sim {

std::uint64_t flushes_to_full(int t, int levels) {
    if (t < 2 || levels < 1) throw ConfigError("flushes_to_full: need T >= 2, levels >= 1");
    std::uint64_t n = 1;
    for (int i = 0; i < levels; ++i) n *= std::uint64_t(t);
    return n - 1;
}

BuiltTree build_full_tree(const LsmDesign& design, const SystemParams& sys,
                          std::uint64_t seed) {
    BuiltTree out;
    out.tree = std::make_unique<SimTree>(design, sys, seed);
    out.fill_flushes =
        flushes_to_full(int(std::lround(design.T)), out.tree->design_levels());
    out.fill_entries = out.fill_flushes * out.tree->flush_capacity();
    out.keys.reserve(out.fill_entries);
    SplitMix64 rng(seed ^ 0x66696c6cULL);
    for (std::uint64_t i = 0; i < out.fill_entries; ++i) {
        std::uint64_t key = rng.next();
        out.tree->put(key, rng.next());
        out.keys.push_back(key);
    }
    return out;
}

namespace {

std::array<std::uint64_t, 4> op_counts(const Workload& w, std::uint64_t queries) {
    std::array<double, 4> frac = {w.z0, w.z1, w.q, w.w};
    std::array<std::uint64_t, 4> n{};
    std::array<double, 4> rem{};
    std::uint64_t assigned = 0;
    for (int i = 0; i < 4; ++i) {
        double exact = frac[i] * double(queries);
        n[i] = std::uint64_t(exact);
        rem[i] = exact - double(n[i]);
        assigned += n[i];
    }
    while (assigned < queries) {
        int best = 0;
        for (int i = 1; i < 4; ++i)
            if (rem[i] > rem[best]) best = i;
        ++n[best];
        rem[best] = -1.0;
        ++assigned;
    }
    return n;
}

std::uint64_t query_path_ios(const IoCounters& c) {
    return c.random_reads + c.sequential_reads;
}

}  // namespace

SessionStats run_session(SimTree& tree, std::vector<std::uint64_t>& keys,
                         const Session& session, std::uint64_t seed,
                         double update_fraction) {
    if (session.workloads.empty())
        throw ConfigError("run_session: session has no workloads");
    if (update_fraction < 0.0 || update_fraction > 1.0)
        throw ConfigError("run_session: update_fraction outside [0, 1]");
    const SystemParams& sys = tree.sys();
    double f_seq = sys.f_seq;
    double f_a = sys.f_a;

    SessionStats stats;
    stats.before = tree.counters();
    SplitMix64 rng(seed);
    SplitMix64 absent(rng.split());  // disjoint stream for empty-get keys

    std::uint64_t span = std::uint64_t(
        std::min(1.8446744073709552e19, sys.s_rq * 1.8446744073709552e19));

    std::uint64_t session_puts = 0;
    for (const auto& sw : session.workloads) {
        WorkloadIoStats ws;
        ws.target = sw.w;
        ws.queries = session.queries_per_workload;
        auto n = op_counts(sw.w, ws.queries);

        std::vector<std::uint8_t> ops;
        ops.reserve(ws.queries);
        for (int t = 0; t < 4; ++t) ops.insert(ops.end(), n[t], std::uint8_t(t));
        for (std::size_t i = ops.size(); i > 1; --i)
            std::swap(ops[i - 1], ops[rng.next_below(i - 1)]);

        double empty_ios = 0, nonempty_ios = 0, range_ios = 0;
        for (std::uint8_t op : ops) {
            IoCounters snap = tree.counters();
            switch (op) {
                case 0:
                    tree.point_get(absent.next());
                    empty_ios += double(query_path_ios(tree.counters()) - query_path_ios(snap));
                    break;
                case 1: {
                    if (keys.empty()) throw ConfigError("run_session: no resident keys");
                    tree.point_get(keys[rng.next_below(keys.size() - 1)]);
                    nonempty_ios +=
                        double(query_path_ios(tree.counters()) - query_path_ios(snap));
                    break;
                }
                case 2: {
                    std::uint64_t lo = span >= ~0ULL ? 0 : rng.next_below(~0ULL - span);
                    tree.range_get(lo, lo + span);
                    const IoCounters& now = tree.counters();
                    range_ios += double(now.random_reads - snap.random_reads) +
                                 f_seq * double(now.sequential_reads - snap.sequential_reads);
                    break;
                }
                case 3: {
                    bool update = !keys.empty() && rng.next_double() < update_fraction;
                    std::uint64_t key =
                        update ? keys[rng.next_below(keys.size() - 1)] : rng.next();
                    tree.put(key, rng.next());
                    if (!update) keys.push_back(key);
                    ++session_puts;
                    break;
                }
            }
        }
        ws.counts = n;
        ws.empty_get_ios = n[0] ? empty_ios / double(n[0]) : 0.0;
        ws.nonempty_get_ios = n[1] ? nonempty_ios / double(n[1]) : 0.0;
        ws.range_ios = n[2] ? range_ios / double(n[2]) : 0.0;
        stats.per_workload.push_back(ws);
    }

    stats.after = tree.counters();
    double maint =
        f_seq * (double(stats.after.compaction_reads - stats.before.compaction_reads) +
                 f_a * double(stats.after.compaction_writes - stats.before.compaction_writes));
    stats.amortized_write_ios = session_puts ? maint / double(session_puts) : 0.0;

    for (auto& ws : stats.per_workload) {
        ws.write_ios = stats.amortized_write_ios;
        double total = ws.empty_get_ios * double(ws.counts[0]) +
                       ws.nonempty_get_ios * double(ws.counts[1]) +
                       ws.range_ios * double(ws.counts[2]) +
                       ws.write_ios * double(ws.counts[3]);
        ws.ios_per_query = ws.queries ? total / double(ws.queries) : 0.0;
    }
    return stats;
}

}  // namespace endure::sim
