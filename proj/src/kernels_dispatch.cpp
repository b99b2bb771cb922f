#include "anyon/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace anyon::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::axpy, &scalar::dotu, &scalar::gemv};
#if defined(ANYON_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::axpy, &avx2::dotu, &avx2::gemv};
#endif

bool cpu_has_avx2() {
#if defined(ANYON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("ANYON_ISA"); env && std::string(env) == "scalar") return &kScalar;
    return &table_for(cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar);
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

} // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

const KernelTable& table_for(Isa isa) {
#if defined(ANYON_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        if (!cpu_has_avx2()) throw ValidationError("AVX2/FMA kernels are not supported on this CPU");
        return kAvx2;
    }
#else
    if (isa == Isa::Avx2) throw ValidationError("built without AVX2 kernels");
#endif
    return kScalar;
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) { current().store(&table_for(isa), std::memory_order_relaxed); }

} // namespace anyon::kernels
