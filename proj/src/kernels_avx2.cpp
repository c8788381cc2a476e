// AVX2 variants of the solver inner loops. Built with -mavx2 -mfma and only
// dispatched to when the CPU reports both features.

#include "tumatch/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <cmath>
#include <immintrin.h>
#include <limits>

namespace tumatch::kernels {
namespace {

// Cephes-style exp for 4 packed doubles: e^x = 1 + 2 p/(q - p) with
// p = r P(r^2), q = Q(r^2) after range reduction r = x - n ln2.
// Inputs are clamped, so the only special case left to callers is NaN.
inline __m256d exp_pd(__m256d x) {
    const __m256d hi = _mm256_set1_pd(709.43);
    const __m256d lo = _mm256_set1_pd(-709.43);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    x = _mm256_min_pd(x, hi);
    x = _mm256_max_pd(x, lo);

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    const __m256d r2 = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, r2, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent field
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(n64));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double logsumexp_avx2(const double* x, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    double m = ninf;
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_set1_pd(ninf);
        for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
        m = hmax(vm);
    }
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    if (!std::isfinite(m)) return m;

    const __m256d vmax = _mm256_set1_pd(m);
    __m256d acc = _mm256_setzero_pd();
    i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vmax)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::exp(x[i] - m);
    return m + std::log(s);
}

double logsumexp_shifted_avx2(const double* x, const double* s, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    double m = ninf;
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vm = _mm256_set1_pd(ninf);
        for (; i + 4 <= n; i += 4)
            vm = _mm256_max_pd(
                vm, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(s + i)));
        m = hmax(vm);
    }
    for (; i < n; ++i) {
        const double d = x[i] - s[i];
        if (d > m) m = d;
    }
    if (!std::isfinite(m)) return m;

    const __m256d vmax = _mm256_set1_pd(m);
    __m256d acc = _mm256_setzero_pd();
    i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(s + i));
        acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(d, vmax)));
    }
    double acc_s = hsum(acc);
    for (; i < n; ++i) acc_s += std::exp(x[i] - s[i] - m);
    return m + std::log(acc_s);
}

void exp_shifted_avx2(const double* x, const double* s, double shift,
                      double* out, std::size_t n) {
    const __m256d vshift = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(s + i));
        _mm256_storeu_pd(out + i, exp_pd(_mm256_add_pd(d, vshift)));
    }
    for (; i < n; ++i) out[i] = std::exp(x[i] - s[i] + shift);
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{sum_avx2, dot_avx2, logsumexp_avx2,
                         logsumexp_shifted_avx2, exp_shifted_avx2, "avx2"};
    return ops;
}

} // namespace tumatch::kernels

#else

namespace tumatch::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
} // namespace tumatch::kernels

#endif
