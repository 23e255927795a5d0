#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kernels_internal.hpp"

namespace gcnn::simd {
namespace {

bool cpu_has_avx2() {
#if defined(GCNN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    Isa isa = detected_isa();
    if (const char* env = std::getenv("GCNN_ISA")) {
        const std::string_view want(env);
        if (want == "scalar") isa = Isa::Scalar;
        else if (want == "avx2" && isa_supported(Isa::Avx2)) isa = Isa::Avx2;
    }
    return isa;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "scalar";
}

Isa detected_isa() {
    static const bool avx2 = cpu_has_avx2();
    return avx2 ? Isa::Avx2 : Isa::Scalar;
}

bool isa_supported(Isa isa) { return isa == Isa::Scalar || detected_isa() == Isa::Avx2; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) throw std::invalid_argument("instruction set " + std::string(isa_name(isa)) + " is not available");
    active().store(isa, std::memory_order_relaxed);
}

template <>
const KernelTable<float>& kernels<float>(Isa isa) {
#if defined(GCNN_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        if (!isa_supported(isa)) throw std::invalid_argument("avx2 kernels are not available on this CPU");
        return avx2::table_f32();
    }
#endif
    if (isa != Isa::Scalar) throw std::invalid_argument("kernel variant not built");
    return scalar::table_f32();
}

template <>
const KernelTable<double>& kernels<double>(Isa isa) {
#if defined(GCNN_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        if (!isa_supported(isa)) throw std::invalid_argument("avx2 kernels are not available on this CPU");
        return avx2::table_f64();
    }
#endif
    if (isa != Isa::Scalar) throw std::invalid_argument("kernel variant not built");
    return scalar::table_f64();
}

template <>
const KernelTable<float>& kernels<float>() {
    return kernels<float>(active_isa());
}

template <>
const KernelTable<double>& kernels<double>() {
    return kernels<double>(active_isa());
}

}  // namespace gcnn::simd
