#ifndef ENDURE_TESTS_SUPPORT_FIXTURES_HPP
#define ENDURE_TESTS_SUPPORT_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "endure/cost_model.hpp"
#include "endure/rng.hpp"
#include "endure/types.hpp"

namespace fixtures {

// N = 1e6 entries of 64 B, 64-entry pages, 10 bits of memory per entry.
inline endure::SystemParams desk_sys() {
    endure::SystemParams sys;
    sys.N = 1e6;
    sys.E = 512.0;
    sys.B = 64.0;
    sys.m = 1e7;
    sys.f_a = 1.0;
    sys.f_seq = 1.0;
    sys.s_rq = 1e-4;
    return sys;
}

// 10 billion 1 KB entries, 4 KB pages, 10 bits per entry.
inline endure::SystemParams paper_sys() {
    endure::SystemParams sys;
    sys.N = 1e10;
    sys.E = 8192.0;
    sys.B = 4.0;
    sys.m = 1e11;
    sys.f_a = 1.0;
    sys.f_seq = 1.0;
    sys.s_rq = 1e-6;
    return sys;
}

struct RandomInput {
    endure::SystemParams sys;
    endure::LsmDesign d;
};

// Random but sane (design, system) pair: real-valued T, random memory split,
// explicit per-level capacities.
inline RandomInput random_input(endure::SplitMix64& rng) {
    RandomInput in;
    auto u = [&rng] { return rng.next_double(); };

    in.sys.N = std::pow(10.0, 5.0 + 4.0 * u());
    in.sys.E = 64.0 * std::pow(2.0, std::floor(u() * 8.0));
    in.sys.B = 4.0 * std::pow(2.0, std::floor(u() * 7.0));
    in.sys.m = in.sys.N * (4.0 + 12.0 * u());
    in.sys.f_a = 0.2 + 1.8 * u();
    in.sys.f_seq = 0.1 + 0.9 * u();
    in.sys.s_rq = std::pow(10.0, -4.0 - 4.0 * u());

    in.d.T = 2.05 + 47.95 * u();
    in.d.m_filt = 0.8 * u() * in.sys.m;
    const int L = endure::level_count(in.d.T, in.sys, in.sys.m - in.d.m_filt);
    in.d.K.resize(static_cast<std::size_t>(L));
    for (double& k : in.d.K) k = 1.0 + u() * (in.d.T - 2.0);
    return in;
}

// Strictly positive random workload.
inline endure::Workload random_workload(endure::SplitMix64& rng) {
    double v[4];
    double sum = 0.0;
    for (double& x : v) {
        x = 0.01 + rng.next_double();
        sum += x;
    }
    return {v[0] / sum, v[1] / sum, v[2] / sum, v[3] / sum};
}

}  // namespace fixtures

#endif
