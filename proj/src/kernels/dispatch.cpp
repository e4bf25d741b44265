#include <cstdlib>
#include <string>

#include "endure/kernels/batch.hpp"

namespace endure::kernels {

namespace {

struct Backend {
    void (*cost)(const WorkloadBatch&, const CostVector&, double*);
    void (*kl)(const WorkloadBatch&, const Workload&, double*);
    std::string name;
};

Backend resolve() {
    const char* forced = std::getenv("ENDURE_KERNELS");
    const std::string want = forced ? forced : "";
#if defined(__x86_64__) || defined(_M_X64)
    if (want != "scalar" && detail::avx2_supported())
        return {&detail::batch_cost_avx2, &detail::batch_kl_avx2, "avx2"};
#endif
    return {&detail::batch_cost_scalar, &detail::batch_kl_scalar, "scalar"};
}

const Backend& active() {
    static const Backend backend = resolve();
    return backend;
}

}  // namespace

void batch_cost(const WorkloadBatch& batch, const CostVector& c, double* out) {
    active().cost(batch, c, out);
}

void batch_kl(const WorkloadBatch& batch, const Workload& center, double* out) {
    active().kl(batch, center, out);
}

const std::string& backend() { return active().name; }

}  // namespace endure::kernels
