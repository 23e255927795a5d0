#pragma once

#include <string_view>

namespace gcnn::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Dense arithmetic used by the convolution and fully connected layers.
/// Matrices are row-major with explicit leading dimensions.
template <typename T>
struct KernelTable {
    Isa isa;

    /// C[m×n] = A[m×k] · B[k×n], or C += A·B when accumulate is set.
    void (*gemm)(int m, int n, int k, const T* a, int lda, const T* b, int ldb, T* c, int ldc, bool accumulate);

    /// C[m×n] = Aᵀ · B with A stored as k×m, or C += Aᵀ·B.
    void (*gemm_tn)(int m, int n, int k, const T* a, int lda, const T* b, int ldb, T* c, int ldc, bool accumulate);

    T (*dot)(int n, const T* x, const T* y);

    /// y += alpha · x
    void (*axpy)(int n, T alpha, const T* x, T* y);

    /// c[r][j] = max(0, c[r][j] + bias[j])
    void (*bias_relu)(int rows, int cols, T* c, int ldc, const T* bias);

    /// grad[i] = activation[i] > 0 ? grad[i] : 0
    void (*relu_backward)(int n, const T* activation, T* grad);

    /// acc[j] += sum over r of x[r][j]
    void (*add_rows)(int rows, int cols, const T* x, int ldx, T* acc);
};

/// Best instruction set the running CPU supports.
Isa detected_isa();
bool isa_supported(Isa isa);

/// The table in use. Initialized from detected_isa(), overridable with the
/// GCNN_ISA environment variable ("scalar" or "avx2") or set_active_isa.
Isa active_isa();

/// Throws std::invalid_argument when the CPU lacks the instruction set.
void set_active_isa(Isa isa);

template <typename T>
const KernelTable<T>& kernels();

/// A specific variant, regardless of the active selection.
template <typename T>
const KernelTable<T>& kernels(Isa isa);

template <> const KernelTable<float>& kernels<float>();
template <> const KernelTable<double>& kernels<double>();
template <> const KernelTable<float>& kernels<float>(Isa isa);
template <> const KernelTable<double>& kernels<double>(Isa isa);

}  // namespace gcnn::simd
