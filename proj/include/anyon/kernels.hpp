// kernels.hpp — Complex BLAS-1/2 inner loops with scalar reference and AVX2 variants
//
// All dense solves, superoperator applications and spectrum assembly funnel
// through these three primitives. The active instruction set is chosen once
// at startup from CPUID and can be pinned for testing.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "anyon/params.hpp"

namespace anyon::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// y += a * x
using AxpyFn = void (*)(std::size_t n, cplx a, const cplx* x, cplx* y);
// sum_i x_i * y_i (no conjugation)
using DotuFn = cplx (*)(std::size_t n, const cplx* x, const cplx* y);
// y = A x, A column-major rows x cols with leading dimension lda
using GemvFn = void (*)(std::size_t rows, std::size_t cols, const cplx* a, std::size_t lda, const cplx* x, cplx* y);

struct KernelTable {
    Isa isa;
    AxpyFn axpy;
    DotuFn dotu;
    GemvFn gemv;
};

namespace scalar {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
void gemv(std::size_t rows, std::size_t cols, const cplx* a, std::size_t lda, const cplx* x, cplx* y);
} // namespace scalar

#if defined(ANYON_HAVE_AVX2)
namespace avx2 {
void axpy(std::size_t n, cplx a, const cplx* x, cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
void gemv(std::size_t rows, std::size_t cols, const cplx* a, std::size_t lda, const cplx* x, cplx* y);
} // namespace avx2
#endif

bool isa_supported(Isa isa);
const KernelTable& table_for(Isa isa);

// Currently selected table. Defaults to the best supported ISA unless the
// ANYON_ISA environment variable is set to "scalar".
const KernelTable& active();
Isa active_isa();
// Throws ValidationError if the ISA is not available on this CPU/build.
void set_active_isa(Isa isa);

inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
    active().axpy(x.size(), a, x.data(), y.data());
}
inline cplx dotu(std::span<const cplx> x, std::span<const cplx> y) {
    return active().dotu(x.size(), x.data(), y.data());
}

} // namespace anyon::kernels
