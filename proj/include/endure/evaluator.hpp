#ifndef ENDURE_EVALUATOR_HPP
#define ENDURE_EVALUATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "endure/cost_model.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/robust_tuner.hpp"
#include "endure/workload_bench.hpp"

namespace endure {

// Relative cost regret of phi1 against phi2 at w: C(w,phi1)/C(w,phi2) - 1.
// Positive means phi2 is the better tuning at w.
double delta_throughput(const Workload& w, const LsmDesign& phi1, const LsmDesign& phi2,
                        const SystemParams& sys);

// Throughput spread 1/min(C) - 1/max(C) over every benchmark workload.
double throughput_range(const BenchmarkSet& bench, const LsmDesign& phi,
                        const SystemParams& sys);

struct SweepOptions {
    Policy family = Policy::klsm;
    DesignBounds bounds;
    SolverParams solver;
    bool with_records = true;
};

struct ComparisonRecord {
    Workload observed;
    double rho = 0.0;
    double kl_observed = 0.0;
    double cost_nominal = 0.0;
    double cost_robust = 0.0;
    double delta = 0.0;  // nominal regret against the robust tuning
};

struct RhoSweepCell {
    double rho = 0.0;
    bool solved = false;
    std::string error;
    std::optional<RobustResult> robust;
    double mean_delta = 0.0;
    double median_delta = 0.0;
    double theta_robust = 0.0;
    double theta_nominal = 0.0;
};

struct RhoSweepResult {
    Workload center;
    TuningResult nominal;
    std::vector<RhoSweepCell> cells;
    std::vector<ComparisonRecord> records;  // solved cells x benchmark samples
};

// Tunes nominally at the center, then robustly per rho, and compares both
// tunings on every benchmark workload. A cell whose robust solve fails is
// recorded with its error and skipped; the sweep itself never throws for
// per-cell failures.
RhoSweepResult rho_sweep(const Workload& center, const SystemParams& sys,
                         const std::vector<double>& rhos, const BenchmarkSet& bench,
                         const SweepOptions& opts = {});

struct DriftCurve {
    std::string label;
    LsmDesign design;
    std::vector<double> mean_cost;  // one entry per divergence bin
};

struct DriftBins {
    std::vector<double> lo, hi;      // KL bounds per bin
    std::vector<double> mean_kl;     // mean divergence per bin
    std::vector<std::size_t> count;  // samples per bin
};

struct DriftResult {
    Workload center;
    double rho = 0.0;
    DriftBins bins;
    std::vector<DriftCurve> curves;
};

// Buckets the benchmark into equal-count divergence bins around the center
// and reports mean model cost per bin for each family's nominal tuning plus
// one robust tuning at the given rho.
DriftResult drift_experiment(const Workload& center, const SystemParams& sys,
                             const std::vector<Policy>& families, double rho,
                             const BenchmarkSet& bench, const SweepOptions& opts = {},
                             std::size_t n_bins = 20);

// Spearman rank correlation; ties get average ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace endure

#endif
