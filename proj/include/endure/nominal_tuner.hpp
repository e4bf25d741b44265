#ifndef ENDURE_NOMINAL_TUNER_HPP
#define ENDURE_NOMINAL_TUNER_HPP

#include <cstdint>

#include "endure/cost_model.hpp"
#include "endure/design_space.hpp"
#include "endure/types.hpp"

namespace endure {

struct SolverParams {
    int starts = 16;
    int max_iterations = 200;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
};

struct TuningProblem {
    Workload expected;
    SystemParams sys;
    Policy family = Policy::klsm;
    DesignBounds bounds;
    SolverParams solver;
};

struct SolverStatus {
    bool converged = false;
    int iterations = 0;
    long evaluations = 0;
    int winning_start = -1;
};

struct TuningResult {
    LsmDesign design;              // continuous solution
    LsmDesign deployed;            // integer T, rounded K
    double objective = 0.0;        // expected cost of `design`
    double deployed_objective = 0.0;
    bool rounding_flagged = false; // deployed cost strayed > 15% from continuous
    SolverStatus status;
};

// Minimizes expected cost over the family's design space.
TuningResult solve_nominal(const TuningProblem& problem);

// Same, but with the memory split frozen (Fluid family over T and K only).
// The effective budget becomes m_filt_fixed + m_buf_fixed.
TuningResult solve_nominal_fixed_memory(const TuningProblem& problem,
                                        double m_filt_fixed, double m_buf_fixed);

}  // namespace endure

#endif
