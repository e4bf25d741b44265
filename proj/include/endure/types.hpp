#ifndef ENDURE_TYPES_HPP
#define ENDURE_TYPES_HPP

#include <array>
#include <cstddef>

namespace endure {

// Fractions of the four query types in a stream: empty point lookups (z0),
// non-empty point lookups (z1), range lookups (q) and writes (w).
// A valid workload is a probability vector.
struct Workload {
    double z0 = 0.0;
    double z1 = 0.0;
    double q = 0.0;
    double w = 0.0;

    double sum() const { return z0 + z1 + q + w; }
    std::array<double, 4> as_array() const { return {z0, z1, q, w}; }
    double operator[](std::size_t i) const {
        return i == 0 ? z0 : i == 1 ? z1 : i == 2 ? q : w;
    }
};

bool operator==(const Workload& a, const Workload& b);

bool workload_valid(const Workload& w, double tol = 1e-9);
void require_valid_workload(const Workload& w);

// Builds a workload from non-negative query counts (rejects all-zero).
Workload normalized_workload(double z0, double z1, double q, double w);

// Environment constants. Memory quantities are in bits, N in entries,
// B in entries per page.
struct SystemParams {
    double N = 1e7;      // total entries
    double E = 8192.0;   // entry size (bits)
    double B = 4.0;      // entries per page
    double m = 1e8;      // total memory budget for filters + buffer (bits)
    double f_a = 1.0;    // write/read storage asymmetry
    double f_seq = 1.0;  // cost of a sequential I/O relative to a random one
    double s_rq = 0.0;   // range query selectivity (fraction of N)
};

void require_valid_system(const SystemParams& sys);

// Expected I/Os per query of each type for one concrete tuning.
struct CostVector {
    double z0 = 0.0;
    double z1 = 0.0;
    double q = 0.0;
    double w = 0.0;

    double total(const Workload& wl) const {
        return wl.z0 * z0 + wl.z1 * z1 + wl.q * q + wl.w * w;
    }
    double operator[](std::size_t i) const {
        return i == 0 ? z0 : i == 1 ? z1 : i == 2 ? q : w;
    }
    double max_component() const;
};

}  // namespace endure

#endif
