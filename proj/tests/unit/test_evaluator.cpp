#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "endure/errors.hpp"
#include "endure/evaluator.hpp"
#include "fixtures.hpp"

using namespace endure;

TEST_CASE("throughput regret between two tunings") {
    SystemParams sys = fixtures::desk_sys();
    LsmDesign lean = make_design(Policy::leveling, 10.0, 5e6, sys);
    LsmDesign fat = make_design(Policy::tiering, 10.0, 5e6, sys);
    const Workload reads{0.1, 0.8, 0.05, 0.05};

    CHECK(delta_throughput(reads, lean, lean, sys) == 0.0);

    const double d = delta_throughput(reads, fat, lean, sys);
    const CostVector cl = cost_vector(lean, sys);
    const CostVector cf = cost_vector(fat, sys);
    CHECK(d == doctest::Approx(cf.total(reads) / cl.total(reads) - 1.0).epsilon(1e-12));
    CHECK(d > 0.0);  // leveling wins a read-heavy stream
    CHECK(delta_throughput(reads, lean, fat, sys) < 0.0);
}

TEST_CASE("zero model cost is rejected rather than divided by") {
    SystemParams sys = fixtures::desk_sys();
    sys.m = 2e9;
    // a filter budget high enough to underflow every FPR to zero makes the
    // pure empty-read stream free under the model
    LsmDesign d = make_design(Policy::leveling, 10.0, 1.8e9, sys);
    const Workload empties{1.0, 0.0, 0.0, 0.0};
    REQUIRE(cost_vector(d, sys).total(empties) == 0.0);
    CHECK_THROWS_AS(delta_throughput(empties, d, d, sys), ZeroCost);
}

TEST_CASE("throughput range over a benchmark") {
    SystemParams sys = fixtures::desk_sys();
    LsmDesign d = make_design(Policy::leveling, 8.0, 5e6, sys);
    BenchmarkSet bench = sample_benchmark(77, 500, 10000);

    const double spread = throughput_range(bench, d, sys);
    CHECK(spread >= 0.0);

    const CostVector c = cost_vector(d, sys);
    double lo = 1e300, hi = 0.0;
    for (const auto& s : bench.samples) {
        lo = std::min(lo, c.total(s.w));
        hi = std::max(hi, c.total(s.w));
    }
    CHECK(spread == doctest::Approx(1.0 / lo - 1.0 / hi).epsilon(1e-12));

    BenchmarkSet one = sample_benchmark(3, 1, 100);
    CHECK(throughput_range(one, d, sys) == 0.0);

    BenchmarkSet empty;
    CHECK_THROWS_AS(throughput_range(empty, d, sys), ConfigError);
}

TEST_CASE("rho sweep compares nominal and robust tunings per sample") {
    SystemParams sys = fixtures::desk_sys();
    const Workload center = expected_workloads()[0].w;
    BenchmarkSet bench = sample_benchmark(21, 200, 10000);
    SweepOptions opts;
    opts.solver.seed = 5;

    RhoSweepResult r = rho_sweep(center, sys, {0.5, 1.0}, bench, opts);
    CHECK(r.center == center);
    CHECK(r.nominal.status.converged);
    REQUIRE(r.cells.size() == 2);
    REQUIRE(r.records.size() == 2 * bench.samples.size());

    const CostVector cn = cost_vector(r.nominal.design, sys);
    std::size_t at = 0;
    for (const RhoSweepCell& cell : r.cells) {
        REQUIRE(cell.solved);
        REQUIRE(cell.robust.has_value());
        CHECK(cell.error.empty());
        CHECK(cell.theta_nominal ==
              doctest::Approx(throughput_range(bench, r.nominal.design, sys))
                  .epsilon(1e-12));

        const CostVector cr = cost_vector(cell.robust->design, sys);
        CHECK(cell.theta_robust ==
              doctest::Approx(throughput_range(bench, cell.robust->design, sys))
                  .epsilon(1e-12));
        std::vector<double> deltas;
        for (std::size_t i = 0; i < bench.samples.size(); ++i, ++at) {
            const ComparisonRecord& rec = r.records[at];
            CHECK(rec.rho == cell.rho);
            CHECK(std::isfinite(rec.kl_observed));
            CHECK(rec.kl_observed >= 0.0);
            CHECK(rec.cost_nominal == doctest::Approx(cn.total(rec.observed)).epsilon(1e-9));
            CHECK(rec.cost_robust == doctest::Approx(cr.total(rec.observed)).epsilon(1e-9));
            CHECK(rec.delta ==
                  doctest::Approx(rec.cost_nominal / rec.cost_robust - 1.0).epsilon(1e-9));
            deltas.push_back(rec.delta);
        }
        double mean = 0.0;
        for (double d : deltas) mean += d;
        mean /= double(deltas.size());
        CHECK(cell.mean_delta == doctest::Approx(mean).epsilon(1e-9));

        std::sort(deltas.begin(), deltas.end());
        const std::size_t n = deltas.size();
        const double median =
            n % 2 ? deltas[n / 2] : 0.5 * (deltas[n / 2 - 1] + deltas[n / 2]);
        CHECK(cell.median_delta == doctest::Approx(median).epsilon(1e-9));
    }

    SweepOptions bare = opts;
    bare.with_records = false;
    RhoSweepResult lean = rho_sweep(center, sys, {0.5}, bench, bare);
    CHECK(lean.records.empty());
    CHECK(lean.cells.size() == 1);
    CHECK(lean.cells[0].mean_delta ==
          doctest::Approx(r.cells[0].mean_delta).epsilon(1e-9));
}

TEST_CASE("failed cells are recorded without aborting the sweep") {
    SystemParams sys = fixtures::desk_sys();
    BenchmarkSet bench = sample_benchmark(21, 50, 10000);
    SweepOptions opts;
    opts.solver.seed = 5;

    // an unrepresentable center only breaks the cells with positive radius
    const Workload degenerate{0.5, 0.5, 0.0, 0.0};
    RhoSweepResult r = rho_sweep(degenerate, sys, {0.0, 1.0}, bench, opts);
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].solved);
    CHECK(!r.cells[1].solved);
    CHECK(!r.cells[1].error.empty());
    CHECK(r.records.size() == bench.samples.size());
}

TEST_CASE("drift experiment bins the benchmark by divergence") {
    SystemParams sys = fixtures::desk_sys();
    const Workload center = expected_workloads()[0].w;
    BenchmarkSet bench = sample_benchmark(8, 400, 10000);
    SweepOptions opts;
    opts.solver.seed = 5;

    const std::vector<Policy> families{Policy::leveling, Policy::tiering};
    DriftResult r = drift_experiment(center, sys, families, 1.0, bench, opts, 8);

    REQUIRE(r.bins.lo.size() == 8);
    REQUIRE(r.bins.hi.size() == 8);
    REQUIRE(r.bins.count.size() == 8);
    std::size_t total = 0;
    for (std::size_t b = 0; b < 8; ++b) {
        total += r.bins.count[b];
        CHECK(r.bins.lo[b] <= r.bins.mean_kl[b] + 1e-12);
        CHECK(r.bins.mean_kl[b] <= r.bins.hi[b] + 1e-12);
        if (b) CHECK(r.bins.lo[b] >= r.bins.lo[b - 1]);
    }
    CHECK(total == bench.samples.size());
    // equal-count binning: sizes differ by at most one
    const std::size_t lo_count = *std::min_element(r.bins.count.begin(), r.bins.count.end());
    const std::size_t hi_count = *std::max_element(r.bins.count.begin(), r.bins.count.end());
    CHECK(hi_count - lo_count <= 1);

    REQUIRE(r.curves.size() == families.size() + 1);
    CHECK(r.curves[0].label == "leveling");
    CHECK(r.curves[1].label == "tiering");
    CHECK(r.curves.back().label == "robust");
    for (const DriftCurve& c : r.curves) {
        REQUIRE(c.mean_cost.size() == 8);
        for (double v : c.mean_cost) CHECK(v > 0.0);
    }

    CHECK_THROWS_AS(drift_experiment(center, sys, families, 1.0, bench, opts, 500),
                    ConfigError);
}

TEST_CASE("spearman rank correlation") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
    CHECK(spearman({1, 2, 3, 4}, {1, 1, 2, 2}) == doctest::Approx(0.8944).epsilon(1e-3));
    CHECK(std::abs(spearman({1, 2, 3, 4, 5, 6, 7, 8},
                            {2, 1, 4, 3, 6, 5, 8, 7})) < 1.0);
    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), ConfigError);
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), ConfigError);
}
