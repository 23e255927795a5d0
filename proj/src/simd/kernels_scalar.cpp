// Reference kernels. Every SIMD variant is tested against these.

#include <algorithm>

#include "kernels_internal.hpp"

namespace gcnn::simd::scalar {
namespace {

template <typename T>
void gemm(int m, int n, int k, const T* a, int lda, const T* b, int ldb, T* c, int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
        if (!accumulate) std::fill(crow, crow + n, T{0});
        for (int p = 0; p < k; ++p) {
            const T aip = a[static_cast<std::ptrdiff_t>(i) * lda + p];
            const T* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
            for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

template <typename T>
void gemm_tn(int m, int n, int k, const T* a, int lda, const T* b, int ldb, T* c, int ldc, bool accumulate) {
    if (!accumulate)
        for (int i = 0; i < m; ++i) std::fill(c + static_cast<std::ptrdiff_t>(i) * ldc, c + static_cast<std::ptrdiff_t>(i) * ldc + n, T{0});
    for (int p = 0; p < k; ++p) {
        const T* arow = a + static_cast<std::ptrdiff_t>(p) * lda;
        const T* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
        for (int i = 0; i < m; ++i) {
            const T api = arow[i];
            T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
            for (int j = 0; j < n; ++j) crow[j] += api * brow[j];
        }
    }
}

template <typename T>
T dot(int n, const T* x, const T* y) {
    T s{0};
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

template <typename T>
void axpy(int n, T alpha, const T* x, T* y) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void bias_relu(int rows, int cols, T* c, int ldc, const T* bias) {
    for (int r = 0; r < rows; ++r) {
        T* row = c + static_cast<std::ptrdiff_t>(r) * ldc;
        for (int j = 0; j < cols; ++j) row[j] = std::max(T{0}, row[j] + bias[j]);
    }
}

template <typename T>
void relu_backward(int n, const T* activation, T* grad) {
    for (int i = 0; i < n; ++i)
        if (!(activation[i] > T{0})) grad[i] = T{0};
}

template <typename T>
void add_rows(int rows, int cols, const T* x, int ldx, T* acc) {
    for (int r = 0; r < rows; ++r) {
        const T* row = x + static_cast<std::ptrdiff_t>(r) * ldx;
        for (int j = 0; j < cols; ++j) acc[j] += row[j];
    }
}

template <typename T>
constexpr KernelTable<T> make_table() {
    return {Isa::Scalar, &gemm<T>, &gemm_tn<T>, &dot<T>, &axpy<T>, &bias_relu<T>, &relu_backward<T>, &add_rows<T>};
}

constexpr KernelTable<float> kF32 = make_table<float>();
constexpr KernelTable<double> kF64 = make_table<double>();

}  // namespace

const KernelTable<float>& table_f32() { return kF32; }
const KernelTable<double>& table_f64() { return kF64; }

}  // namespace gcnn::simd::scalar
