// AVX2/FMA variants of the batch kernels. Only compiled on x86-64; callers
// go through the dispatcher, which checks CPU support first.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "endure/errors.hpp"
#include "endure/kernels/batch.hpp"

namespace endure::kernels::detail {

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// log(x) for positive normal doubles: split x = 2^e * m with m in
// [sqrt(2)/2, sqrt(2)), then 2*atanh((m-1)/(m+1)) via its odd series.
inline __m256d vlog(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256i exp_mask = _mm256_set1_epi64x(0x7ffLL << 52);

    const __m256i xi = _mm256_castpd_si256(x);
    const __m256i biased = _mm256_srli_epi64(_mm256_and_si256(xi, exp_mask), 52);
    const __m256i mant_bits =
        _mm256_or_si256(_mm256_andnot_si256(exp_mask, xi), _mm256_set1_epi64x(0x3ffLL << 52));
    __m256d m = _mm256_castsi256_pd(mant_bits);

    // biased exponent fits in 11 bits, so the 2^52 trick converts it exactly
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
    const __m256d fold = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
    e = _mm256_add_pd(e, _mm256_and_pd(fold, one));

    const __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d r2 = _mm256_mul_pd(r, r);
    __m256d p = _mm256_set1_pd(1.0 / 19.0);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, r2, one);
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(r, r), p);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    __m256d res = _mm256_fmadd_pd(e, ln2_hi, logm);
    res = _mm256_fmadd_pd(e, ln2_lo, res);
    return res;
}

inline __m256d kl_terms(const double* p_ptr, double center, __m256d acc) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d p = _mm256_loadu_pd(p_ptr);
    const __m256d alive = _mm256_cmp_pd(p, zero, _CMP_GT_OQ);
    __m256d ratio = _mm256_div_pd(p, _mm256_set1_pd(center));
    ratio = _mm256_blendv_pd(one, ratio, alive);
    const __m256d term = _mm256_and_pd(_mm256_mul_pd(p, vlog(ratio)), alive);
    return _mm256_add_pd(acc, term);
}

inline double kl_term_scalar(double p, double q) {
    return p > 0.0 ? p * std::log(p / q) : 0.0;
}

}  // namespace

void batch_cost_avx2(const WorkloadBatch& batch, const CostVector& c, double* out) {
    const std::size_t n = batch.size();
    const __m256d cz0 = _mm256_set1_pd(c.z0);
    const __m256d cz1 = _mm256_set1_pd(c.z1);
    const __m256d cq = _mm256_set1_pd(c.q);
    const __m256d cw = _mm256_set1_pd(c.w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(&batch.z0[i]), cz0);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&batch.z1[i]), cz1, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&batch.q[i]), cq, acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&batch.w[i]), cw, acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i)
        out[i] = batch.z0[i] * c.z0 + batch.z1[i] * c.z1 +
                 batch.q[i] * c.q + batch.w[i] * c.w;
}

void batch_kl_avx2(const WorkloadBatch& batch, const Workload& center, double* out) {
    if (!(center.z0 > 0.0 && center.z1 > 0.0 && center.q > 0.0 && center.w > 0.0))
        throw ConfigError("batch_kl needs a strictly positive center");
    const std::size_t n = batch.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        acc = kl_terms(&batch.z0[i], center.z0, acc);
        acc = kl_terms(&batch.z1[i], center.z1, acc);
        acc = kl_terms(&batch.q[i], center.q, acc);
        acc = kl_terms(&batch.w[i], center.w, acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i)
        out[i] = kl_term_scalar(batch.z0[i], center.z0) + kl_term_scalar(batch.z1[i], center.z1) +
                 kl_term_scalar(batch.q[i], center.q) + kl_term_scalar(batch.w[i], center.w);
}

}  // namespace endure::kernels::detail

#endif  // x86-64
