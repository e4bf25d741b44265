#ifndef ENDURE_COST_MODEL_HPP
#define ENDURE_COST_MODEL_HPP

#include <string>
#include <vector>

#include "endure/types.hpp"

namespace endure {

// Named layouts from the unified design space. Every one of them is a
// pattern over the per-level run capacities K_i in [1, T-1]:
//   leveling      K_i = 1
//   tiering       K_i = T-1
//   lazy_leveling K_L = 1, K_i = T-1 above
//   one_leveling  K_1 = T-1, K_i = 1 below
//   fluid         K_i = K_upper above, K_L = K_last
//   klsm          explicit vector
enum class Policy { leveling, tiering, lazy_leveling, one_leveling, fluid, klsm };

std::string to_string(Policy p);
Policy policy_from_string(const std::string& s);

// A tuning: size ratio T (real while solving, integer once deployed),
// Bloom filter memory m_filt in bits, and the capacity vector. The write
// buffer gets whatever memory the filters do not use: m_buf = m - m_filt.
struct LsmDesign {
    double T = 10.0;
    double m_filt = 0.0;
    std::vector<double> K;
};

void require_valid_design(const LsmDesign& d, const SystemParams& sys);

// Capacity vector for a named policy at a given depth.
std::vector<double> expand_policy(Policy p, double T, int levels,
                                  double k_upper = 1.0, double k_last = 1.0);

// Builds a design whose K vector matches level_count(T, sys, m - m_filt).
LsmDesign make_design(Policy p, double T, double m_filt, const SystemParams& sys,
                      double k_upper = 1.0, double k_last = 1.0);

// Best-effort reverse of expand_policy, for reporting.
Policy classify_design(const LsmDesign& d, double tol = 1e-9);

// Number of levels needed to hold N entries given a buffer of m_buf bits.
int level_count(double T, const SystemParams& sys, double m_buf);

// Same quantity without the ceiling; level_count = ceil(smooth_level_count).
double smooth_level_count(double T, const SystemParams& sys, double m_buf);

// Entry capacity of a tree with every level full.
double full_tree_entries(double T, const SystemParams& sys, double m_buf);

// Per-level false positive rates under the memory-optimal allocation,
// clamped to [0, 1]. Index 0 is the shallowest level.
std::vector<double> bloom_fprs(double T, double m_filt, const SystemParams& sys);
std::vector<double> bloom_fprs(double T, int levels, double m_filt, const SystemParams& sys);

// Re-fit a capacity vector to a different depth: truncate, or extend with
// the deepest stored value.
std::vector<double> expand_capacities(const std::vector<double>& K, int levels);

double empty_point_cost(const LsmDesign& d, const SystemParams& sys);
double nonempty_point_cost(const LsmDesign& d, const SystemParams& sys);
double range_cost(const LsmDesign& d, const SystemParams& sys);
double write_cost(const LsmDesign& d, const SystemParams& sys);

CostVector cost_vector(const LsmDesign& d, const SystemParams& sys);
double total_cost(const Workload& w, const LsmDesign& d, const SystemParams& sys);

// Continuous surrogate used inside the tuners: the fractional level count
// enters the filter exponents and the deepest level is weighted by its
// fractional part, so the value has no jumps at level boundaries. Coincides
// with cost_vector whenever smooth_level_count is an integer.
CostVector cost_vector_smooth(const LsmDesign& d, const SystemParams& sys);

// Integer-rounds a continuous solution: T to its ceiling, K to the nearest
// integers in [1, ceil(T)-1], re-fit to the deployed level count.
LsmDesign deployed_design(const LsmDesign& d, const SystemParams& sys);

}  // namespace endure

#endif
