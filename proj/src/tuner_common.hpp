#ifndef ENDURE_SRC_TUNER_COMMON_HPP
#define ENDURE_SRC_TUNER_COMMON_HPP

#include <functional>
#include <vector>

#include "endure/design_space.hpp"
#include "endure/nominal_tuner.hpp"
#include "endure/solver.hpp"

// Shared multi-start driver for both tuners: minimizes a smooth surrogate
// over a design space, then selects among start endpoints by the reported
// (ceiled-level) metric with the smaller-T / smaller-m_filt tie-break.

namespace endure::detail {

struct SpaceObjectives {
    std::function<double(const LsmDesign&)> smooth;
    std::function<double(const LsmDesign&)> reported;
};

struct SpaceSolveOutcome {
    LsmDesign design;   // K refit to the solution's own level count
    double reported = 0.0;
    MinimizeResult raw;
};

bool prefer_design(const LsmDesign& a, double fa, const LsmDesign& b, double fb);

SpaceSolveOutcome minimize_over_space(const DesignSpace& space, const SpaceObjectives& obj,
                                      const SolverParams& params,
                                      const std::vector<LsmDesign>& warm_designs);

}  // namespace endure::detail

#endif
