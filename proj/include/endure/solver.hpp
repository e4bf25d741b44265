#ifndef ENDURE_SOLVER_HPP
#define ENDURE_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace endure {

// Box-constrained local minimizer: projected BFGS with central-difference
// gradients and an Armijo backtracking line search, restarted from a Halton
// point set so results are deterministic for a given seed.

struct BoxBounds {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dims() const { return lo.size(); }
};

// Returns true when candidate (xa, fa) should win over incumbent (xb, fb).
// Lets callers break near-ties by their own criteria (e.g. prefer the
// smaller size ratio); default is plain fa < fb.
using Preference = std::function<bool(const std::vector<double>& xa, double fa,
                                      const std::vector<double>& xb, double fb)>;

struct MinimizeOptions {
    int starts = 16;
    int max_iterations = 200;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    // Additional start points (clamped to the box), tried after the Halton set.
    std::vector<std::vector<double>> warm_starts;
    Preference prefer;
};

struct MinimizeResult {
    std::vector<double> x;
    double fx = 0.0;
    bool converged = false;
    int iterations = 0;     // iterations of the winning start
    long evaluations = 0;   // objective evaluations across all starts
    int winning_start = -1;
};

using Objective = std::function<double(const std::vector<double>&)>;

MinimizeResult minimize_box(const Objective& f, const BoxBounds& box,
                            const MinimizeOptions& opts);

}  // namespace endure

#endif
