// End-to-end acceptance gates. Each check exercises one user-visible promise
// of the toolkit against an independent reference (the summation oracle, a
// simplex grid, a shadow map, the I/O-counting simulator) and prints a single
// verdict line with the measured margin. The binary exits nonzero if any gate
// fails, including a blown wall-clock budget.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "endure/cost_model.hpp"
#include "endure/evaluator.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/rng.hpp"
#include "endure/robust_tuner.hpp"
#include "endure/sim/session.hpp"
#include "endure/sim/tree.hpp"
#include "endure/types.hpp"
#include "endure/workload_bench.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace endure;

namespace {

constexpr double kModelTol = 1e-9;
constexpr double kReductionTol = 1e-12;
constexpr double kDominanceSlack = 0.02;
constexpr double kZeroRadiusSlack = 0.01;
constexpr double kDualGapTol = 1e-3;
constexpr double kSpearmanCeiling = -0.8;
constexpr double kSimReadTol = 0.25;
constexpr double kSimWriteTol = 0.30;

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
}

// Mixed absolute/relative gap, same convention the unit suite uses for
// approximate comparisons: tiny quantities are judged absolutely.
double gap(double got, double want) {
    return std::abs(got - want) / (1.0 + std::max(std::abs(got), std::abs(want)));
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

const BenchmarkSet& bench10k() {
    static const BenchmarkSet b = sample_benchmark(7, 10000, 10000);
    return b;
}

// ---------------------------------------------------------------------------
// 1. Every cost-model quantity against the brute-force summation oracle.

Verdict model_vs_oracle() {
    SplitMix64 rng(0x0acce97ed5eed001ULL);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        fixtures::RandomInput in = fixtures::random_input(rng);
        oracle::ModelBreakdown ref = oracle::model(in.d.T, in.d.m_filt, in.d.K, in.sys);

        if (level_count(in.d.T, in.sys, in.sys.m - in.d.m_filt) != ref.levels)
            return {false, fmt("level count disagrees on trial %d", trial)};

        std::vector<double> f = bloom_fprs(in.d.T, in.d.m_filt, in.sys);
        if (f.size() != ref.fpr.size())
            return {false, fmt("filter vector length disagrees on trial %d", trial)};
        for (std::size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst, gap(f[i], ref.fpr[i]));

        CostVector c = cost_vector(in.d, in.sys);
        worst = std::max({worst, gap(c.z0, ref.z0), gap(c.z1, ref.z1), gap(c.q, ref.q),
                          gap(c.w, ref.w)});
    }
    return {worst <= kModelTol,
            fmt("max rel err %.2e over 1000 randomized inputs (tol %.0e)", worst, kModelTol)};
}

// ---------------------------------------------------------------------------
// 2. Named layouts cost exactly like their explicit capacity vectors.

Verdict reductions_exact() {
    SplitMix64 rng(0x5ca1ab1eULL);
    double worst = 0.0;
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        fixtures::RandomInput in = fixtures::random_input(rng);
        const double T = in.d.T;
        const int L = level_count(T, in.sys, in.sys.m - in.d.m_filt);
        const double full = T - 1.0;
        const double k_u = 1.0 + rng.next_double() * (T - 2.0);
        const double k_l = 1.0 + rng.next_double() * (T - 2.0);

        struct Case {
            Policy p;
            std::vector<double> k;
        };
        std::vector<Case> cases = {
            {Policy::leveling, std::vector<double>(std::size_t(L), 1.0)},
            {Policy::tiering, std::vector<double>(std::size_t(L), full)},
            {Policy::lazy_leveling, std::vector<double>(std::size_t(L), full)},
            {Policy::one_leveling, std::vector<double>(std::size_t(L), 1.0)},
            {Policy::fluid, std::vector<double>(std::size_t(L), k_u)},
        };
        cases[2].k.back() = 1.0;
        cases[3].k.front() = full;
        cases[4].k.back() = k_l;

        for (const Case& c : cases) {
            LsmDesign named = (c.p == Policy::fluid)
                                  ? make_design(c.p, T, in.d.m_filt, in.sys, k_u, k_l)
                                  : make_design(c.p, T, in.d.m_filt, in.sys);
            LsmDesign raw{T, in.d.m_filt, c.k};
            CostVector a = cost_vector(named, in.sys);
            CostVector b = cost_vector(raw, in.sys);
            for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, gap(a[i], b[i]));
            ++checked;
        }
    }
    return {worst <= kReductionTol,
            fmt("max rel err %.2e over %d layout/grid pairs (tol %.0e)", worst, checked,
                kReductionTol)};
}

// ---------------------------------------------------------------------------
// 3. The free capacity search at least ties every named layout, and collapses
//    to leveling where leveling is optimal.

Verdict superset_dominates() {
    const SystemParams sys = fixtures::desk_sys();
    const auto& table = expected_workloads();
    double worst_excess = -1.0;
    bool all_ones = true;
    for (std::size_t idx : {std::size_t(7), std::size_t(11)}) {
        const Workload w = table[idx].w;
        TuningResult klsm = solve_nominal({w, sys, Policy::klsm, {}, {}});
        double best_named = std::numeric_limits<double>::infinity();
        for (Policy p : {Policy::leveling, Policy::tiering, Policy::lazy_leveling})
            best_named = std::min(best_named, solve_nominal({w, sys, p, {}, {}}).objective);
        worst_excess = std::max(worst_excess, klsm.objective / best_named - 1.0);
        if (idx == 11)
            for (double k : klsm.deployed.K) all_ones = all_ones && k == 1.0;
    }
    const bool pass = worst_excess <= kDominanceSlack && all_ones;
    return {pass, fmt("excess over best named layout %.3f%% (cap %.0f%%); read-heavy "
                      "solution rounds to all K_i = 1: %s",
                      100.0 * worst_excess, 100.0 * kDominanceSlack,
                      all_ones ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 4. A vanishing uncertainty radius reproduces the nominal tuning.

Verdict zero_radius_consistent() {
    const SystemParams sys = fixtures::desk_sys();
    double worst = 0.0;
    for (const ExpectedWorkload& ew : expected_workloads()) {
        TuningResult nominal = solve_nominal({ew.w, sys, Policy::klsm, {}, {}});
        RobustResult robust = solve_robust({ew.w, 1e-6}, sys, Policy::klsm, {}, {});
        worst = std::max(worst,
                         std::abs(robust.objective - nominal.objective) / nominal.objective);
    }
    return {worst <= kZeroRadiusSlack,
            fmt("max center-cost drift %.3f%% over 15 centers (cap %.0f%%)", 100.0 * worst,
                100.0 * kZeroRadiusSlack)};
}

// ---------------------------------------------------------------------------
// 5. The minimized dual upper bound coincides with the worst expectation found
//    by exhaustive simplex search.

Verdict dual_matches_grid() {
    SplitMix64 rng(0xd0a1ULL);
    const double radii[] = {0.25, 1.0, 2.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Workload center = fixtures::random_workload(rng);
        const double rho = radii[i % 3];
        fixtures::RandomInput in = fixtures::random_input(rng);
        const CostVector c = cost_vector(in.d, in.sys);
        const double dual = minimize_dual(c, {center, rho}).value;
        const double grid =
            oracle::worst_case_on_grid({c.z0, c.z1, c.q, c.w}, center, rho);
        if (dual < grid - 1e-9)
            return {false, fmt("dual %.6g below a feasible grid point %.6g (case %d)",
                               dual, grid, i)};
        worst = std::max(worst, gap(dual, grid));
    }
    return {worst <= kDualGapTol,
            fmt("max dual/grid gap %.2e over 5 cases (tol %.0e)", worst, kDualGapTol)};
}

// ---------------------------------------------------------------------------
// 6 + 7. One full sweep feeds both the drift-gain gate and the spread gate:
// 15 centers x 16 radii x the 10k benchmark.

struct SweepData {
    bool ok = false;
    std::string error;
    std::vector<double> rhos;
    std::vector<std::vector<double>> mean_delta;    // [center][rho]
    std::vector<std::vector<double>> theta_robust;  // [center][rho]
};

const SweepData& full_sweep() {
    static const SweepData data = [] {
        SweepData d;
        for (int i = 1; i <= 16; ++i) d.rhos.push_back(0.25 * i);
        SweepOptions opts;
        opts.with_records = false;
        const SystemParams sys = fixtures::desk_sys();
        const auto& table = expected_workloads();
        for (const ExpectedWorkload& ew : table) {
            RhoSweepResult res = rho_sweep(ew.w, sys, d.rhos, bench10k(), opts);
            std::vector<double> deltas, thetas;
            for (const RhoSweepCell& cell : res.cells) {
                if (!cell.solved) {
                    d.error = fmt("cell rho=%.2f failed: %s", cell.rho, cell.error.c_str());
                    return d;
                }
                deltas.push_back(cell.mean_delta);
                thetas.push_back(cell.theta_robust);
            }
            d.mean_delta.push_back(std::move(deltas));
            d.theta_robust.push_back(std::move(thetas));
        }
        d.ok = true;
        return d;
    }();
    return data;
}

Verdict robust_gains_under_drift() {
    const SweepData& d = full_sweep();
    if (!d.ok) return {false, d.error};

    double min_gain = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < d.mean_delta.size(); ++c)
        for (std::size_t j = 0; j < d.rhos.size(); ++j)
            if (d.rhos[j] >= 0.5) min_gain = std::min(min_gain, d.mean_delta[c][j]);
    const double uniform_tail = d.mean_delta[0].back();

    const bool pass = min_gain > 0.0 && uniform_tail < 0.0;
    return {pass, fmt("min mean gain %.4f across non-uniform centers at rho >= 0.5 "
                      "(need > 0); uniform center %.4f at rho = 4 (need < 0)",
                      min_gain, uniform_tail)};
}

Verdict spread_contracts() {
    const SweepData& d = full_sweep();
    if (!d.ok) return {false, d.error};

    std::vector<double> avg_theta(d.rhos.size(), 0.0);
    for (const auto& row : d.theta_robust)
        for (std::size_t j = 0; j < row.size(); ++j) avg_theta[j] += row[j];
    for (double& t : avg_theta) t /= double(d.theta_robust.size());

    const double sp = spearman(avg_theta, d.rhos);
    return {sp <= kSpearmanCeiling,
            fmt("Spearman(mean throughput spread, radius) = %.3f (need <= %.1f)", sp,
                kSpearmanCeiling)};
}

// ---------------------------------------------------------------------------
// 8. At the radius the history heuristic picks for this benchmark, every
//    deployed robust design degenerates to leveling.

Verdict robust_deploys_leveling() {
    std::vector<Workload> history;
    history.reserve(bench10k().samples.size());
    for (const BenchSample& s : bench10k().samples) history.push_back(s.w);
    const double rho = rho_from_history(history);

    const SystemParams sys = fixtures::desk_sys();
    int off = 0;
    for (const ExpectedWorkload& ew : expected_workloads()) {
        RobustResult r = solve_robust({ew.w, rho}, sys, Policy::klsm, {}, {});
        for (double k : r.deployed.K)
            if (k != 1.0) ++off;
    }
    return {off == 0, fmt("heuristic radius %.3f; capacities above 1 across 15 deployed "
                          "designs: %d (need 0)",
                          rho, off)};
}

// ---------------------------------------------------------------------------
// 9. The I/O-counting simulator reproduces the analytical predictions, and its
//    query results match a shadow std::map exactly.

struct SimConfig {
    Policy policy;
    int t;
    long cap;     // buffer entries, via m_buf = (cap + 0.5) * E
    double fill;  // entries after building the full tree: (T^L - 1) * cap
};

Verdict simulator_tracks_model() {
    const Workload uniform{0.25, 0.25, 0.25, 0.25};
    const SimConfig grid[] = {
        {Policy::leveling, 4, 977, 999471.0},      {Policy::leveling, 6, 772, 999740.0},
        {Policy::leveling, 8, 244, 999180.0},      {Policy::tiering, 4, 977, 999471.0},
        {Policy::tiering, 6, 772, 999740.0},       {Policy::tiering, 8, 244, 999180.0},
        {Policy::lazy_leveling, 4, 977, 999471.0}, {Policy::lazy_leveling, 6, 772, 999740.0},
        {Policy::lazy_leveling, 8, 244, 999180.0},
    };

    double worst_read = 0.0, worst_write = 0.0;
    int cfg_index = 0;
    for (const SimConfig& cfg : grid) {
        SystemParams sys;
        sys.N = cfg.fill;
        sys.E = 512.0;
        sys.B = 64.0;
        sys.m = 1e7;
        sys.f_a = 1.0;
        sys.f_seq = 1.0;
        sys.s_rq = 6.4e-4;
        const double m_buf = (double(cfg.cap) + 0.5) * sys.E;
        const LsmDesign d = make_design(cfg.policy, double(cfg.t), sys.m - m_buf, sys);
        const CostVector model = cost_vector(d, sys);

        sim::BuiltTree built = sim::build_full_tree(d, sys, 0xf111ULL + cfg_index);
        if (double(built.fill_entries) != cfg.fill)
            return {false, fmt("fill size %llu != expected %.0f (config %d)",
                               (unsigned long long)built.fill_entries, cfg.fill, cfg_index)};

        Session session;
        session.center = uniform;
        session.workloads = {{uniform, false}};
        session.queries_per_workload = 100000;
        session.seed = 0x5e55ULL + cfg_index;
        sim::SessionStats stats =
            sim::run_session(*built.tree, built.keys, session, 0xca11ULL + cfg_index, 0.0);

        const sim::WorkloadIoStats& wl = stats.per_workload[0];
        worst_read = std::max({worst_read,
                               std::abs(wl.empty_get_ios - model.z0) / model.z0,
                               std::abs(wl.nonempty_get_ios - model.z1) / model.z1,
                               std::abs(wl.range_ios - model.q) / model.q});

        // Maintenance cost amortized from the first put ever, so the session
        // does not need to be long enough to trigger the deepest compactions.
        const sim::IoCounters& after = built.tree->counters();
        const double w_sim = sys.f_seq *
                             (double(after.compaction_reads) +
                              sys.f_a * double(after.compaction_writes)) /
                             double(after.puts);
        worst_write = std::max(worst_write, std::abs(w_sim - model.w) / model.w);
        ++cfg_index;
    }

    // Differential check against an exact shadow map on a small tree that
    // still compacts constantly.
    SystemParams small;
    small.N = 60000;
    small.E = 512.0;
    small.B = 16.0;
    small.m = 1e6;
    small.s_rq = 1e-3;
    const double m_buf = 32.5 * small.E;
    const LsmDesign d = make_design(Policy::lazy_leveling, 4.0, small.m - m_buf, small);
    sim::SimTree tree(d, small, 0xd1ffULL);
    std::map<std::uint64_t, std::uint64_t> shadow;
    SplitMix64 rng(0x5ad0ed0eULL);
    long mismatches = 0;
    for (int op = 0; op < 10000; ++op) {
        const std::uint64_t roll = rng.next_below(99);
        if (roll < 45) {
            const std::uint64_t key = rng.next_below(2500);
            const std::uint64_t val = rng.next();
            tree.put(key, val);
            shadow[key] = val;
        } else if (roll < 80) {
            const std::uint64_t key = rng.next_below(2500);
            auto got = tree.point_get(key);
            auto it = shadow.find(key);
            const bool same = it == shadow.end() ? !got.has_value()
                                                 : got.has_value() && *got == it->second;
            mismatches += same ? 0 : 1;
        } else {
            const std::uint64_t lo = rng.next_below(2500);
            const std::uint64_t hi = lo + rng.next_below(150);
            auto got = tree.range_get(lo, hi);
            std::vector<std::pair<std::uint64_t, std::uint64_t>> want(
                shadow.lower_bound(lo), shadow.upper_bound(hi));
            mismatches += got == want ? 0 : 1;
        }
    }

    const bool pass =
        worst_read <= kSimReadTol && worst_write <= kSimWriteTol && mismatches == 0;
    return {pass, fmt("max read gap %.1f%% (cap %.0f%%), write gap %.1f%% (cap %.0f%%) "
                      "over 9 configs; shadow-map mismatches %ld",
                      100.0 * worst_read, 100.0 * kSimReadTol, 100.0 * worst_write,
                      100.0 * kSimWriteTol, mismatches)};
}

// ---------------------------------------------------------------------------
// 10. Under increasing drift the robust tuning degrades the least, while the
//     free nominal tuning still wins right at the center.

Verdict drift_curve_shape() {
    const SystemParams sys = fixtures::desk_sys();
    const Workload center = expected_workloads()[7].w;
    SweepOptions opts;
    opts.with_records = false;
    DriftResult res = drift_experiment(
        center, sys,
        {Policy::klsm, Policy::fluid, Policy::lazy_leveling, Policy::leveling,
         Policy::tiering},
        2.0, bench10k(), opts);

    double robust_rise = 0.0, robust_first = 0.0, klsm_first = 0.0;
    double best_other_rise = std::numeric_limits<double>::infinity();
    std::string best_other;
    for (const DriftCurve& c : res.curves) {
        const double rise = c.mean_cost.back() - c.mean_cost.front();
        if (c.label == "robust") {
            robust_rise = rise;
            robust_first = c.mean_cost.front();
        } else if (rise < best_other_rise) {
            best_other_rise = rise;
            best_other = c.label;
        }
        if (c.label == to_string(Policy::klsm)) klsm_first = c.mean_cost.front();
    }

    const bool pass = robust_rise <= best_other_rise && klsm_first <= robust_first;
    return {pass, fmt("robust rise %.3f vs best alternative %.3f (%s); near-center cost "
                      "%.3f free vs %.3f robust",
                      robust_rise, best_other_rise, best_other.c_str(), klsm_first,
                      robust_first)};
}

}  // namespace

int main() {
    struct Gate {
        const char* name;
        double budget_s;  // 0 = untimed
        std::function<Verdict()> run;
    };
    const std::vector<Gate> gates = {
        {"cost model matches the summation oracle", 10.0, model_vs_oracle},
        {"named layouts match explicit capacity vectors", 0.0, reductions_exact},
        {"free capacity search at least ties named layouts", 60.0, superset_dominates},
        {"vanishing radius recovers the nominal tuning", 120.0, zero_radius_consistent},
        {"dual bound equals the simplex-grid worst case", 300.0, dual_matches_grid},
        {"robust beats nominal on drifted workloads", 600.0, robust_gains_under_drift},
        {"throughput spread shrinks as the radius grows", 0.0, spread_contracts},
        {"heuristic-radius robust designs deploy as leveling", 0.0, robust_deploys_leveling},
        {"simulator tracks the cost model", 600.0, simulator_tracks_model},
        {"robust drift curve is the flattest", 0.0, drift_curve_shape},
    };

    int failures = 0;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = g.run();
        } catch (const std::exception& e) {
            v = {false, fmt("unhandled error: %s", e.what())};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (g.budget_s > 0.0 && secs > g.budget_s) {
            v.pass = false;
            v.detail += fmt("; over %.0f s budget", g.budget_s);
        }
        std::printf("%2zu %s %7.1fs  %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", secs,
                    g.name, v.detail.c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }

    std::printf("%zu/%zu acceptance gates passed\n", gates.size() - failures, gates.size());
    return failures == 0 ? 0 : 1;
}
