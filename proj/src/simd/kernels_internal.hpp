#pragma once

#include "gcnn/simd/kernels.hpp"

namespace gcnn::simd {

namespace scalar {
const KernelTable<float>& table_f32();
const KernelTable<double>& table_f64();
}  // namespace scalar

#if defined(GCNN_HAVE_AVX2)
namespace avx2 {
const KernelTable<float>& table_f32();
const KernelTable<double>& table_f64();
}  // namespace avx2
#endif

}  // namespace gcnn::simd
