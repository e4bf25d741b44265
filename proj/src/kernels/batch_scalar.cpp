#include <cmath>

#include "endure/errors.hpp"
#include "endure/kernels/batch.hpp"

namespace endure::kernels {

void WorkloadBatch::reserve(std::size_t n) {
    z0.reserve(n);
    z1.reserve(n);
    q.reserve(n);
    w.reserve(n);
}

void WorkloadBatch::push(const Workload& wl) {
    z0.push_back(wl.z0);
    z1.push_back(wl.z1);
    q.push_back(wl.q);
    w.push_back(wl.w);
}

namespace detail {

void batch_cost_scalar(const WorkloadBatch& batch, const CostVector& c, double* out) {
    const std::size_t n = batch.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = batch.z0[i] * c.z0 + batch.z1[i] * c.z1 +
                 batch.q[i] * c.q + batch.w[i] * c.w;
}

namespace {
inline double kl_term(double p, double q) {
    return p > 0.0 ? p * std::log(p / q) : 0.0;
}
}  // namespace

void batch_kl_scalar(const WorkloadBatch& batch, const Workload& center, double* out) {
    if (!(center.z0 > 0.0 && center.z1 > 0.0 && center.q > 0.0 && center.w > 0.0))
        throw ConfigError("batch_kl needs a strictly positive center");
    const std::size_t n = batch.size();
    for (std::size_t i = 0; i < n; ++i)
        out[i] = kl_term(batch.z0[i], center.z0) + kl_term(batch.z1[i], center.z1) +
                 kl_term(batch.q[i], center.q) + kl_term(batch.w[i], center.w);
}

}  // namespace detail

}  // namespace endure::kernels
