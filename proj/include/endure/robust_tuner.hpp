#ifndef ENDURE_ROBUST_TUNER_HPP
#define ENDURE_ROBUST_TUNER_HPP

#include <vector>

#include "endure/cost_model.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/types.hpp"

namespace endure {

// KL ball around an expected workload: { w' : KL(w' || center) <= rho }.
struct UncertaintyRegion {
    Workload center;
    double rho = 0.0;
};

void require_valid_region(const UncertaintyRegion& region);

// KL(p || q) with 0*ln(0) = 0; +inf when p puts mass where q has none.
double kl_divergence(const Workload& p, const Workload& q);

// Convex conjugate of the KL generator t*ln(t) - t + 1.
double kl_conjugate(double s);

// Exact minimizer of the dual upper bound on the worst-case expected cost
// of a fixed cost vector over the region:
//   g(lambda) = rho*lambda + lambda * ln E_center[exp(c/lambda)].
struct DualSolution {
    double lambda = 0.0;
    double eta = 0.0;
    double value = 0.0;
};

inline constexpr double kLambdaMin = 1e-6;

DualSolution minimize_dual(const CostVector& c, const UncertaintyRegion& region);

// Two-multiplier dual for a concrete design, with the exp argument guarded:
//   g(lambda, eta) = eta + rho*lambda + lambda * sum_i w_i phi*((c_i - eta)/lambda).
double dual_objective(const LsmDesign& d, double lambda, double eta,
                      const UncertaintyRegion& region, const SystemParams& sys);

// The maximizing workload inside the region for a fixed cost vector:
// w'_i proportional to center_i * exp(c_i / lambda).
Workload worst_case_workload(const CostVector& c, const UncertaintyRegion& region,
                             double lambda);

struct RobustResult {
    LsmDesign design;
    LsmDesign deployed;
    double lambda = 0.0;
    double eta = 0.0;
    double dual_objective = 0.0;      // worst-case expected cost bound
    double objective = 0.0;           // cost of `design` at the center
    double deployed_objective = 0.0;  // cost of `deployed` at the center
    double deployed_dual_objective = 0.0;
    bool rounding_flagged = false;
    SolverStatus status;
};

// Minimizes the dual bound over the family's design space; rho below 1e-6
// delegates to the nominal tuner.
RobustResult solve_robust(const UncertaintyRegion& region, const SystemParams& sys,
                          Policy family, const DesignBounds& bounds,
                          const SolverParams& solver = {});

// Radius heuristics from observed workloads.
double rho_from_history(const std::vector<Workload>& history);
double rho_from_pair(const Workload& expected, const Workload& off_period);

}  // namespace endure

#endif
