// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// is only reached after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cstddef>

#include "kernels_internal.hpp"

namespace gcnn::simd::avx2 {
namespace {

struct F32 {
    using T = float;
    using V = __m256;
    static constexpr int W = 8;
    static V zero() { return _mm256_setzero_ps(); }
    static V load(const T* p) { return _mm256_loadu_ps(p); }
    static void store(T* p, V v) { _mm256_storeu_ps(p, v); }
    static V set1(T x) { return _mm256_set1_ps(x); }
    static V fma(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
    static V add(V a, V b) { return _mm256_add_ps(a, b); }
    static V max(V a, V b) { return _mm256_max_ps(a, b); }
    static V keep_positive(V act, V g) { return _mm256_and_ps(_mm256_cmp_ps(act, zero(), _CMP_GT_OQ), g); }
    static T hsum(V v) {
        __m128 s = _mm_add_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
        s = _mm_add_ps(s, _mm_movehl_ps(s, s));
        s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 0x55));
        return _mm_cvtss_f32(s);
    }
};

struct F64 {
    using T = double;
    using V = __m256d;
    static constexpr int W = 4;
    static V zero() { return _mm256_setzero_pd(); }
    static V load(const T* p) { return _mm256_loadu_pd(p); }
    static void store(T* p, V v) { _mm256_storeu_pd(p, v); }
    static V set1(T x) { return _mm256_set1_pd(x); }
    static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
    static V add(V a, V b) { return _mm256_add_pd(a, b); }
    static V max(V a, V b) { return _mm256_max_pd(a, b); }
    static V keep_positive(V act, V g) { return _mm256_and_pd(_mm256_cmp_pd(act, zero(), _CMP_GT_OQ), g); }
    static T hsum(V v) {
        __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
        s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
        return _mm_cvtsd_f64(s);
    }
};

// R rows of C starting at row i. A(r, p) = a[(i + r) * ars + p * aks], which
// covers both A (ars = lda, aks = 1) and Aᵀ (ars = 1, aks = lda).
template <class O, int R>
void row_block(int i, int n, int k, const typename O::T* a, std::ptrdiff_t ars, std::ptrdiff_t aks,
               const typename O::T* b, int ldb, typename O::T* c, int ldc, bool accumulate) {
    using T = typename O::T;
    using V = typename O::V;
    constexpr int W = O::W;
    auto a_at = [&](int r, int p) { return a[(i + r) * ars + p * aks]; };

    int j = 0;
    for (; j + 2 * W <= n; j += 2 * W) {
        V c0[R], c1[R];
        for (int r = 0; r < R; ++r) c0[r] = c1[r] = O::zero();
        for (int p = 0; p < k; ++p) {
            const T* bp = b + static_cast<std::ptrdiff_t>(p) * ldb + j;
            const V b0 = O::load(bp);
            const V b1 = O::load(bp + W);
            for (int r = 0; r < R; ++r) {
                const V av = O::set1(a_at(r, p));
                c0[r] = O::fma(av, b0, c0[r]);
                c1[r] = O::fma(av, b1, c1[r]);
            }
        }
        for (int r = 0; r < R; ++r) {
            T* cr = c + static_cast<std::ptrdiff_t>(i + r) * ldc + j;
            if (accumulate) {
                c0[r] = O::add(c0[r], O::load(cr));
                c1[r] = O::add(c1[r], O::load(cr + W));
            }
            O::store(cr, c0[r]);
            O::store(cr + W, c1[r]);
        }
    }
    for (; j + W <= n; j += W) {
        V c0[R];
        for (int r = 0; r < R; ++r) c0[r] = O::zero();
        for (int p = 0; p < k; ++p) {
            const V b0 = O::load(b + static_cast<std::ptrdiff_t>(p) * ldb + j);
            for (int r = 0; r < R; ++r) c0[r] = O::fma(O::set1(a_at(r, p)), b0, c0[r]);
        }
        for (int r = 0; r < R; ++r) {
            T* cr = c + static_cast<std::ptrdiff_t>(i + r) * ldc + j;
            if (accumulate) c0[r] = O::add(c0[r], O::load(cr));
            O::store(cr, c0[r]);
        }
    }
    for (; j < n; ++j) {
        for (int r = 0; r < R; ++r) {
            T s{0};
            for (int p = 0; p < k; ++p) s += a_at(r, p) * b[static_cast<std::ptrdiff_t>(p) * ldb + j];
            T& cr = c[static_cast<std::ptrdiff_t>(i + r) * ldc + j];
            cr = accumulate ? cr + s : s;
        }
    }
}

template <class O>
void gemm_strided(int m, int n, int k, const typename O::T* a, std::ptrdiff_t ars, std::ptrdiff_t aks,
                  const typename O::T* b, int ldb, typename O::T* c, int ldc, bool accumulate) {
    int i = 0;
    for (; i + 4 <= m; i += 4) row_block<O, 4>(i, n, k, a, ars, aks, b, ldb, c, ldc, accumulate);
    for (; i < m; ++i) row_block<O, 1>(i, n, k, a, ars, aks, b, ldb, c, ldc, accumulate);
}

template <class O>
void gemm(int m, int n, int k, const typename O::T* a, int lda, const typename O::T* b, int ldb, typename O::T* c,
          int ldc, bool accumulate) {
    gemm_strided<O>(m, n, k, a, lda, 1, b, ldb, c, ldc, accumulate);
}

template <class O>
void gemm_tn(int m, int n, int k, const typename O::T* a, int lda, const typename O::T* b, int ldb, typename O::T* c,
             int ldc, bool accumulate) {
    gemm_strided<O>(m, n, k, a, 1, lda, b, ldb, c, ldc, accumulate);
}

template <class O>
typename O::T dot(int n, const typename O::T* x, const typename O::T* y) {
    using V = typename O::V;
    constexpr int W = O::W;
    V s0 = O::zero(), s1 = O::zero(), s2 = O::zero(), s3 = O::zero();
    int i = 0;
    for (; i + 4 * W <= n; i += 4 * W) {
        s0 = O::fma(O::load(x + i), O::load(y + i), s0);
        s1 = O::fma(O::load(x + i + W), O::load(y + i + W), s1);
        s2 = O::fma(O::load(x + i + 2 * W), O::load(y + i + 2 * W), s2);
        s3 = O::fma(O::load(x + i + 3 * W), O::load(y + i + 3 * W), s3);
    }
    for (; i + W <= n; i += W) s0 = O::fma(O::load(x + i), O::load(y + i), s0);
    typename O::T s = O::hsum(O::add(O::add(s0, s1), O::add(s2, s3)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

template <class O>
void axpy(int n, typename O::T alpha, const typename O::T* x, typename O::T* y) {
    constexpr int W = O::W;
    const auto av = O::set1(alpha);
    int i = 0;
    for (; i + W <= n; i += W) O::store(y + i, O::fma(av, O::load(x + i), O::load(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

template <class O>
void bias_relu(int rows, int cols, typename O::T* c, int ldc, const typename O::T* bias) {
    using T = typename O::T;
    constexpr int W = O::W;
    for (int r = 0; r < rows; ++r) {
        T* row = c + static_cast<std::ptrdiff_t>(r) * ldc;
        int j = 0;
        for (; j + W <= cols; j += W) O::store(row + j, O::max(O::zero(), O::add(O::load(row + j), O::load(bias + j))));
        for (; j < cols; ++j) {
            const T v = row[j] + bias[j];
            row[j] = v > T{0} ? v : T{0};
        }
    }
}

template <class O>
void relu_backward(int n, const typename O::T* activation, typename O::T* grad) {
    constexpr int W = O::W;
    int i = 0;
    for (; i + W <= n; i += W) O::store(grad + i, O::keep_positive(O::load(activation + i), O::load(grad + i)));
    for (; i < n; ++i)
        if (!(activation[i] > 0)) grad[i] = 0;
}

template <class O>
void add_rows(int rows, int cols, const typename O::T* x, int ldx, typename O::T* acc) {
    constexpr int W = O::W;
    int j = 0;
    for (; j + W <= cols; j += W) {
        auto s = O::load(acc + j);
        for (int r = 0; r < rows; ++r) s = O::add(s, O::load(x + static_cast<std::ptrdiff_t>(r) * ldx + j));
        O::store(acc + j, s);
    }
    for (; j < cols; ++j)
        for (int r = 0; r < rows; ++r) acc[j] += x[static_cast<std::ptrdiff_t>(r) * ldx + j];
}

template <class O>
KernelTable<typename O::T> make_table() {
    return {Isa::Avx2, &gemm<O>, &gemm_tn<O>, &dot<O>, &axpy<O>, &bias_relu<O>, &relu_backward<O>, &add_rows<O>};
}

}  // namespace

const KernelTable<float>& table_f32() {
    static const KernelTable<float> table = make_table<F32>();
    return table;
}

const KernelTable<double>& table_f64() {
    static const KernelTable<double> table = make_table<F64>();
    return table;
}

}  // namespace gcnn::simd::avx2
