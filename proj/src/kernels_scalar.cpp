#include "anyon/kernels.hpp"

namespace anyon::kernels::scalar {

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr - xi * yi;
        im += xr * yi + xi * yr;
    }
    return {re, im};
}

void gemv(std::size_t rows, std::size_t cols, const cplx* a, std::size_t lda, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        if (x[j] == cplx(0.0, 0.0)) continue;
        axpy(rows, x[j], a + j * lda, y);
    }
}

} // namespace anyon::kernels::scalar
