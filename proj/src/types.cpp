#include "endure/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "endure/errors.hpp"

namespace endure {

bool operator==(const Workload& a, const Workload& b) {
    return a.z0 == b.z0 && a.z1 == b.z1 && a.q == b.q && a.w == b.w;
}

bool workload_valid(const Workload& w, double tol) {
    if (w.z0 < 0.0 || w.z1 < 0.0 || w.q < 0.0 || w.w < 0.0) return false;
    return std::fabs(w.sum() - 1.0) <= tol;
}

void require_valid_workload(const Workload& w) {
    if (!workload_valid(w)) {
        throw ConfigError("workload is not a probability vector: (" +
                          std::to_string(w.z0) + ", " + std::to_string(w.z1) + ", " +
                          std::to_string(w.q) + ", " + std::to_string(w.w) + ")");
    }
}

Workload normalized_workload(double z0, double z1, double q, double w) {
    if (z0 < 0.0 || z1 < 0.0 || q < 0.0 || w < 0.0)
        throw ConfigError("negative query count");
    const double s = z0 + z1 + q + w;
    if (s <= 0.0) throw ConfigError("all query counts are zero");
    return Workload{z0 / s, z1 / s, q / s, w / s};
}

void require_valid_system(const SystemParams& sys) {
    if (!(sys.N >= 1.0)) throw ConfigError("N must be >= 1 entry");
    if (!(sys.E > 0.0)) throw ConfigError("entry size must be positive");
    if (!(sys.B >= 1.0)) throw ConfigError("page must hold at least one entry");
    if (!(sys.m > sys.E)) throw ConfigError("memory budget must admit at least one buffered entry");
    if (!(sys.f_a >= 0.0)) throw ConfigError("asymmetry factor must be >= 0");
    if (!(sys.f_seq > 0.0 && sys.f_seq <= 1.0)) throw ConfigError("f_seq must be in (0, 1]");
    if (!(sys.s_rq >= 0.0 && sys.s_rq <= 1.0)) throw ConfigError("selectivity must be in [0, 1]");
    if (!std::isfinite(sys.N) || !std::isfinite(sys.m)) throw ConfigError("non-finite system parameter");
}

double CostVector::max_component() const {
    return std::max(std::max(z0, z1), std::max(q, w));
}

}  // namespace endure
