#include "endure/robust_tuner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "endure/errors.hpp"
#include "tuner_common.hpp"

namespace endure {

namespace {

// eta has a closed form at fixed lambda (the log-partition of the tilted
// center), so the dual collapses to a 1-D convex problem in lambda:
//   g(lambda) = rho*lambda + lambda * ln E_w[exp(c/lambda)]
// minimized here by golden section on ln(lambda), shifted by max(c) so the
// exponentials never overflow.
double log_mgf(const std::array<double, 4>& c, const std::array<double, 4>& w,
               double lambda, double cmax) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        if (w[i] > 0.0) s += w[i] * std::exp((c[i] - cmax) / lambda);
    return std::log(s);
}

}  // namespace

void require_valid_region(const UncertaintyRegion& region) {
    require_valid_workload(region.center);
    if (!(region.rho >= 0.0) || !std::isfinite(region.rho))
        throw InvalidRegion("rho must be a finite non-negative radius");
    if (region.rho > 0.0) {
        const Workload& c = region.center;
        if (!(c.z0 > 0.0 && c.z1 > 0.0 && c.q > 0.0 && c.w > 0.0))
            throw InvalidRegion("center must be strictly positive when rho > 0");
    }
}

double kl_divergence(const Workload& p, const Workload& q) {
    require_valid_workload(p);
    require_valid_workload(q);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double pi = p[i], qi = q[i];
        if (pi > 0.0) {
            if (!(qi > 0.0)) return std::numeric_limits<double>::infinity();
            s += pi * std::log(pi / qi);
        }
    }
    return std::max(0.0, s);
}

double kl_conjugate(double s) { return std::expm1(s); }

DualSolution minimize_dual(const CostVector& c, const UncertaintyRegion& region) {
    require_valid_region(region);
    const std::array<double, 4> cv = {c.z0, c.z1, c.q, c.w};
    const std::array<double, 4> wv = region.center.as_array();
    double cmax = 0.0;
    for (int i = 0; i < 4; ++i)
        if (wv[i] > 0.0) cmax = std::max(cmax, cv[i]);

    const double rho = region.rho;
    auto g = [&](double t) {
        const double lambda = std::exp(t);
        return rho * lambda + lambda * log_mgf(cv, wv, lambda, cmax) + cmax;
    };

    double a = std::log(kLambdaMin);
    double b = std::log(1e9 * std::max(1.0, cmax));
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = g(x2);
        }
    }
    DualSolution out;
    out.lambda = std::exp(0.5 * (a + b));
    out.eta = cmax + out.lambda * log_mgf(cv, wv, out.lambda, cmax);
    out.value = rho * out.lambda + out.eta;
    return out;
}

double dual_objective(const LsmDesign& d, double lambda, double eta,
                      const UncertaintyRegion& region, const SystemParams& sys) {
    require_valid_region(region);
    if (!(lambda >= kLambdaMin))
        throw ConfigError("dual multiplier below its lower bound");
    const CostVector c = cost_vector(d, sys);
    const std::array<double, 4> cv = {c.z0, c.z1, c.q, c.w};
    const std::array<double, 4> wv = region.center.as_array();
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (wv[i] <= 0.0) continue;
        const double s = (cv[i] - eta) / lambda;
        // linear continuation beyond s=30 keeps the value finite and convex
        // while still pushing the minimizer back into range
        const double phi =
            s <= 30.0 ? std::expm1(s) : std::expm1(30.0) + std::exp(30.0) * (s - 30.0);
        acc += wv[i] * phi;
    }
    return eta + region.rho * lambda + lambda * acc;
}

Workload worst_case_workload(const CostVector& c, const UncertaintyRegion& region,
                             double lambda) {
    require_valid_region(region);
    if (!(lambda >= kLambdaMin))
        throw ConfigError("dual multiplier below its lower bound");
    const std::array<double, 4> cv = {c.z0, c.z1, c.q, c.w};
    const std::array<double, 4> wv = region.center.as_array();
    double cmax = 0.0;
    for (int i = 0; i < 4; ++i)
        if (wv[i] > 0.0) cmax = std::max(cmax, cv[i]);
    std::array<double, 4> tilted{};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        tilted[i] = wv[i] > 0.0 ? wv[i] * std::exp((cv[i] - cmax) / lambda) : 0.0;
        sum += tilted[i];
    }
    return Workload{tilted[0] / sum, tilted[1] / sum, tilted[2] / sum, tilted[3] / sum};
}

namespace {

RobustResult from_outcome(LsmDesign&& design, const UncertaintyRegion& region,
                          const SystemParams& sys, const SolverStatus& status) {
    RobustResult r;
    r.design = std::move(design);
    const DualSolution ds = minimize_dual(cost_vector(r.design, sys), region);
    r.lambda = ds.lambda;
    r.eta = ds.eta;
    r.dual_objective = ds.value;
    r.objective = total_cost(region.center, r.design, sys);
    r.deployed = deployed_design(r.design, sys);
    r.deployed_objective = total_cost(region.center, r.deployed, sys);
    r.deployed_dual_objective = minimize_dual(cost_vector(r.deployed, sys), region).value;
    r.rounding_flagged =
        std::fabs(r.deployed_dual_objective - r.dual_objective) >
        0.15 * std::max(1e-12, std::fabs(r.dual_objective));
    r.status = status;
    return r;
}

}  // namespace

RobustResult solve_robust(const UncertaintyRegion& region, const SystemParams& sys,
                          Policy family, const DesignBounds& bounds,
                          const SolverParams& solver) {
    require_valid_region(region);
    require_valid_bounds(bounds, sys);

    TuningProblem nominal_problem{region.center, sys, family, bounds, solver};
    if (region.rho < kLambdaMin) {
        TuningResult n = solve_nominal(nominal_problem);
        return from_outcome(std::move(n.design), region, sys, n.status);
    }

    const DesignSpace space = DesignSpace::for_family(family, sys, bounds);

    std::vector<LsmDesign> warm;
    warm.push_back(solve_nominal(nominal_problem).design);
    if (family == Policy::klsm || family == Policy::fluid) {
        for (Policy p : {Policy::leveling, Policy::tiering}) {
            warm.push_back(solve_robust(region, sys, p, bounds, solver).design);
        }
    }

    detail::SpaceObjectives obj;
    obj.smooth = [&region, &sys](const LsmDesign& d) {
        return minimize_dual(cost_vector_smooth(d, sys), region).value;
    };
    obj.reported = [&region, &sys](const LsmDesign& d) {
        return minimize_dual(cost_vector(d, sys), region).value;
    };

    auto out = detail::minimize_over_space(space, obj, solver, warm);
    SolverStatus status;
    status.converged = out.raw.converged;
    status.iterations = out.raw.iterations;
    status.evaluations = out.raw.evaluations;
    status.winning_start = out.raw.winning_start;
    return from_outcome(std::move(out.design), region, sys, status);
}

double rho_from_history(const std::vector<Workload>& history) {
    if (history.empty()) throw EmptyHistory("need at least one observed workload");
    double z0 = 0.0, z1 = 0.0, q = 0.0, w = 0.0;
    for (const Workload& h : history) {
        require_valid_workload(h);
        z0 += h.z0;
        z1 += h.z1;
        q += h.q;
        w += h.w;
    }
    const double n = static_cast<double>(history.size());
    const Workload mean{z0 / n, z1 / n, q / n, w / n};
    double rho = 0.0;
    for (const Workload& h : history) {
        const double d = kl_divergence(h, mean);
        if (!std::isfinite(d))
            throw DivergenceInfinite("observed workload outside the mean's support");
        rho = std::max(rho, d);
    }
    return rho;
}

double rho_from_pair(const Workload& expected, const Workload& off_period) {
    const double d = kl_divergence(off_period, expected);
    if (!std::isfinite(d))
        throw DivergenceInfinite("off-period workload outside the expected support");
    return d;
}

}  // namespace endure
