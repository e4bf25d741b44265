#ifndef ENDURE_WORKLOAD_BENCH_HPP
#define ENDURE_WORKLOAD_BENCH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "endure/types.hpp"

namespace endure {

enum class WorkloadCategory { uniform, unimodal, bimodal, trimodal };

std::string to_string(WorkloadCategory c);

struct ExpectedWorkload {
    Workload w;
    WorkloadCategory category;
};

// The 15 canonical expected workloads: one uniform, the four 97%-dominant
// unimodals, the six 49/49 bimodals, the four 33/33/33 trimodals.
const std::vector<ExpectedWorkload>& expected_workloads();

struct BenchSample {
    Workload w;
    std::array<std::uint32_t, 4> counts;
};

struct BenchmarkSet {
    std::vector<BenchSample> samples;
    std::uint64_t seed = 0;
    std::uint32_t max_count = 10000;
    std::string generator;  // RNG algorithm identifier
};

// Each sample draws four integer counts uniformly in [0, max_count],
// rejects all-zero tuples and normalizes.
BenchmarkSet sample_benchmark(std::uint64_t seed, std::size_t size = 10000,
                              std::uint32_t max_count = 10000);

enum class SessionCategory { expected, empty_read, nonempty_read, read, range, write };

std::string to_string(SessionCategory c);
SessionCategory session_category_from_string(const std::string& s);

struct SessionWorkload {
    Workload w;
    bool synthetic = false;  // built by top-up instead of drawn from the bench
};

struct Session {
    SessionCategory category = SessionCategory::expected;
    Workload center;
    std::vector<SessionWorkload> workloads;
    std::uint64_t queries_per_workload = 200000;
    std::uint64_t seed = 0;
};

// Draws workloads of one category from the benchmark pool (without
// replacement), synthesizing flagged extras when the pool runs short.
// "expected" means KL(w || center) < 0.2; the read/range/write categories
// require >= 80% mass on the dominant type (both point-read types count
// for "read").
Session generate_session(SessionCategory category, const Workload& center,
                         const BenchmarkSet& bench, std::size_t n_workloads,
                         std::uint64_t seed, std::uint64_t queries_per_workload = 200000);

// Post-hoc check of the category invariant from the stored workloads alone.
bool workload_in_category(SessionCategory category, const Workload& w,
                          const Workload& center);
bool session_satisfies(const Session& s);

}  // namespace endure

#endif
