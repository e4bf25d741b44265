#include "endure/nominal_tuner.hpp"

#include <cmath>

#include "endure/errors.hpp"
#include "tuner_common.hpp"

namespace endure {

namespace {

TuningResult assemble(const Workload& expected, const SystemParams& sys,
                      detail::SpaceSolveOutcome&& out) {
    TuningResult r;
    r.design = std::move(out.design);
    r.objective = total_cost(expected, r.design, sys);
    r.deployed = deployed_design(r.design, sys);
    r.deployed_objective = total_cost(expected, r.deployed, sys);
    r.rounding_flagged =
        std::fabs(r.deployed_objective - r.objective) >
        0.15 * std::max(1e-12, std::fabs(r.objective));
    r.status.converged = out.raw.converged;
    r.status.iterations = out.raw.iterations;
    r.status.evaluations = out.raw.evaluations;
    r.status.winning_start = out.raw.winning_start;
    return r;
}

detail::SpaceObjectives nominal_objectives(const Workload& w, const SystemParams& sys) {
    detail::SpaceObjectives obj;
    obj.smooth = [w, sys](const LsmDesign& d) { return cost_vector_smooth(d, sys).total(w); };
    obj.reported = [w, sys](const LsmDesign& d) { return total_cost(w, d, sys); };
    return obj;
}

}  // namespace

TuningResult solve_nominal(const TuningProblem& problem) {
    require_valid_workload(problem.expected);
    require_valid_bounds(problem.bounds, problem.sys);
    const DesignSpace space =
        DesignSpace::for_family(problem.family, problem.sys, problem.bounds);

    // The flexible families profit from starting where the pure policies end
    // up; a descent-only refinement from those points keeps them dominated.
    std::vector<LsmDesign> warm;
    if (problem.family == Policy::klsm || problem.family == Policy::fluid) {
        for (Policy p : {Policy::leveling, Policy::tiering, Policy::lazy_leveling}) {
            TuningProblem sub = problem;
            sub.family = p;
            warm.push_back(solve_nominal(sub).design);
        }
    }

    auto out = detail::minimize_over_space(space, nominal_objectives(problem.expected, problem.sys),
                                           problem.solver, warm);
    return assemble(problem.expected, problem.sys, std::move(out));
}

TuningResult solve_nominal_fixed_memory(const TuningProblem& problem,
                                        double m_filt_fixed, double m_buf_fixed) {
    require_valid_workload(problem.expected);
    require_valid_system(problem.sys);
    if (!(m_filt_fixed >= 0.0))
        throw InfeasibleBounds("pinned filter memory must be >= 0");
    if (!(m_buf_fixed > problem.sys.E))
        throw InfeasibleBounds("pinned buffer must hold at least one entry");
    if (m_filt_fixed + m_buf_fixed > 1.01 * problem.sys.m)
        throw InfeasibleBounds("pinned memory exceeds the system budget");

    TuningProblem pinned = problem;
    pinned.sys.m = m_filt_fixed + m_buf_fixed;
    pinned.family = Policy::fluid;
    const DesignSpace space =
        DesignSpace::memory_pinned(pinned.sys, pinned.bounds, m_filt_fixed);
    auto out = detail::minimize_over_space(
        space, nominal_objectives(pinned.expected, pinned.sys), pinned.solver, {});
    return assemble(pinned.expected, pinned.sys, std::move(out));
}

}  // namespace endure
