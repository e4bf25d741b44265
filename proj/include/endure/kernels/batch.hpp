#ifndef ENDURE_KERNELS_BATCH_HPP
#define ENDURE_KERNELS_BATCH_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "endure/types.hpp"

// Batch evaluation kernels for the hot loops of the sweeps: expected cost of
// one tuning over many workloads, and KL divergence of many workloads
// against one center. A scalar reference implementation always exists; on
// x86-64 an AVX2 variant is selected at startup when the CPU supports it.
// Set ENDURE_KERNELS=scalar to force the reference path.

namespace endure::kernels {

// Structure-of-arrays view over a list of workloads.
struct WorkloadBatch {
    std::vector<double> z0, z1, q, w;

    std::size_t size() const { return z0.size(); }
    void reserve(std::size_t n);
    void push(const Workload& wl);
    Workload at(std::size_t i) const { return {z0[i], z1[i], q[i], w[i]}; }
};

// out[i] = dot(batch[i], c). out must hold batch.size() doubles.
void batch_cost(const WorkloadBatch& batch, const CostVector& c, double* out);

// out[i] = KL(batch[i] || center), natural log, 0*ln(0) = 0. Components of
// center must be strictly positive.
void batch_kl(const WorkloadBatch& batch, const Workload& center, double* out);

// Name of the implementation in use: "avx2" or "scalar".
const std::string& backend();

namespace detail {

void batch_cost_scalar(const WorkloadBatch& batch, const CostVector& c, double* out);
void batch_kl_scalar(const WorkloadBatch& batch, const Workload& center, double* out);

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
void batch_cost_avx2(const WorkloadBatch& batch, const CostVector& c, double* out);
void batch_kl_avx2(const WorkloadBatch& batch, const Workload& center, double* out);
#endif

}  // namespace detail

}  // namespace endure::kernels

#endif
