// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include "anyon/kernels.hpp"

#include <immintrin.h>

namespace anyon::kernels::avx2 {

namespace {

// (ar + i ai) * [xr, xi, xr', xi']
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
    const __m256d xs = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

} // namespace

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const auto* xp = reinterpret_cast<const double*>(x);
    auto* yp = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
        const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        const __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(y0, cmul(ar, ai, x0)));
        _mm256_storeu_pd(yp + 2 * i + 4, _mm256_add_pd(y1, cmul(ar, ai, x1)));
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(y0, cmul(ar, ai, x0)));
    }
    if (i < n) scalar::axpy(n - i, a, x + i, y + i);
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y) {
    const auto* xp = reinterpret_cast<const double*>(x);
    const auto* yp = reinterpret_cast<const double*>(y);
    // acc_r accumulates x * Re(y), acc_i accumulates swap(x) * Im(y)
    __m256d acc_r0 = _mm256_setzero_pd(), acc_i0 = _mm256_setzero_pd();
    __m256d acc_r1 = _mm256_setzero_pd(), acc_i1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
        const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        const __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
        acc_r0 = _mm256_fmadd_pd(x0, _mm256_movedup_pd(y0), acc_r0);
        acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(x0, 0b0101), _mm256_permute_pd(y0, 0b1111), acc_i0);
        acc_r1 = _mm256_fmadd_pd(x1, _mm256_movedup_pd(y1), acc_r1);
        acc_i1 = _mm256_fmadd_pd(_mm256_permute_pd(x1, 0b0101), _mm256_permute_pd(y1, 0b1111), acc_i1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        acc_r0 = _mm256_fmadd_pd(x0, _mm256_movedup_pd(y0), acc_r0);
        acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(x0, 0b0101), _mm256_permute_pd(y0, 0b1111), acc_i0);
    }
    const __m256d acc = _mm256_addsub_pd(_mm256_add_pd(acc_r0, acc_r1), _mm256_add_pd(acc_i0, acc_i1));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cplx sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);
    if (i < n) sum += scalar::dotu(n - i, x + i, y + i);
    return sum;
}

void gemv(std::size_t rows, std::size_t cols, const cplx* a, std::size_t lda, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
    std::size_t j = 0;
    // two columns per pass halves the load/store traffic on y
    for (; j + 2 <= cols; j += 2) {
        const __m256d ar0 = _mm256_set1_pd(x[j].real()), ai0 = _mm256_set1_pd(x[j].imag());
        const __m256d ar1 = _mm256_set1_pd(x[j + 1].real()), ai1 = _mm256_set1_pd(x[j + 1].imag());
        const auto* c0 = reinterpret_cast<const double*>(a + j * lda);
        const auto* c1 = reinterpret_cast<const double*>(a + (j + 1) * lda);
        auto* yp = reinterpret_cast<double*>(y);
        std::size_t i = 0;
        for (; i + 2 <= rows; i += 2) {
            __m256d acc = _mm256_loadu_pd(yp + 2 * i);
            acc = _mm256_add_pd(acc, cmul(ar0, ai0, _mm256_loadu_pd(c0 + 2 * i)));
            acc = _mm256_add_pd(acc, cmul(ar1, ai1, _mm256_loadu_pd(c1 + 2 * i)));
            _mm256_storeu_pd(yp + 2 * i, acc);
        }
        if (i < rows) {
            scalar::axpy(1, x[j], a + j * lda + i, y + i);
            scalar::axpy(1, x[j + 1], a + (j + 1) * lda + i, y + i);
        }
    }
    if (j < cols) axpy(rows, x[j], a + j * lda, y);
}

} // namespace anyon::kernels::avx2
