#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gcnn/simd/kernels.hpp"

using namespace gcnn::simd;

namespace {

template <typename T>
std::vector<T> random_vec(std::size_t n, std::mt19937_64& rng, bool with_negatives = true) {
    std::uniform_real_distribution<double> u(with_negatives ? -1.0 : 0.0, 1.0);
    std::vector<T> v(n);
    for (T& x : v) x = static_cast<T>(u(rng));
    return v;
}

template <typename T>
double tol(int k) {
    return (sizeof(T) == 4 ? 2e-6 : 1e-14) * (k + 1);
}

template <typename T>
void expect_close(const std::vector<T>& a, const std::vector<T>& b, double t) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], t) << "index " << i;
}

template <typename T>
class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!isa_supported(Isa::Avx2)) GTEST_SKIP() << "CPU lacks AVX2/FMA";
    }
    const KernelTable<T>& ref = kernels<T>(Isa::Scalar);
    const KernelTable<T>& simd() { return kernels<T>(Isa::Avx2); }
};

using Types = ::testing::Types<float, double>;
TYPED_TEST_SUITE(KernelEquivalence, Types);

TYPED_TEST(KernelEquivalence, Gemm) {
    using T = TypeParam;
    std::mt19937_64 rng(1);
    const auto& fast = this->simd();
    for (int m : {1, 3, 4, 7, 46}) {
        for (int n : {1, 8, 16, 17, 33}) {
            for (int k : {1, 5, 25, 200}) {
                const int lda = k + 3, ldb = n + 1, ldc = n + 2;
                const auto a = random_vec<T>(static_cast<std::size_t>(m) * lda, rng);
                const auto b = random_vec<T>(static_cast<std::size_t>(k) * ldb, rng);
                for (bool acc : {false, true}) {
                    auto c1 = random_vec<T>(static_cast<std::size_t>(m) * ldc, rng);
                    auto c2 = c1;
                    this->ref.gemm(m, n, k, a.data(), lda, b.data(), ldb, c1.data(), ldc, acc);
                    fast.gemm(m, n, k, a.data(), lda, b.data(), ldb, c2.data(), ldc, acc);
                    expect_close(c1, c2, tol<T>(k));
                }
            }
        }
    }
}

TYPED_TEST(KernelEquivalence, GemmTransposedA) {
    using T = TypeParam;
    std::mt19937_64 rng(2);
    const auto& fast = this->simd();
    for (int m : {1, 5, 25, 200}) {
        for (int n : {1, 8, 16, 19}) {
            for (int k : {1, 4, 42, 1764}) {
                const int lda = m + 1, ldb = n, ldc = n + 3;
                const auto a = random_vec<T>(static_cast<std::size_t>(k) * lda, rng);
                const auto b = random_vec<T>(static_cast<std::size_t>(k) * ldb, rng);
                for (bool acc : {false, true}) {
                    auto c1 = random_vec<T>(static_cast<std::size_t>(m) * ldc, rng);
                    auto c2 = c1;
                    this->ref.gemm_tn(m, n, k, a.data(), lda, b.data(), ldb, c1.data(), ldc, acc);
                    fast.gemm_tn(m, n, k, a.data(), lda, b.data(), ldb, c2.data(), ldc, acc);
                    expect_close(c1, c2, tol<T>(k));
                }
            }
        }
    }
}

TYPED_TEST(KernelEquivalence, VectorOps) {
    using T = TypeParam;
    std::mt19937_64 rng(3);
    const auto& fast = this->simd();
    for (int n : {0, 1, 7, 8, 15, 16, 33, 1000, 28224}) {
        const auto x = random_vec<T>(n, rng);
        const auto y = random_vec<T>(n, rng);
        EXPECT_NEAR(this->ref.dot(n, x.data(), y.data()), fast.dot(n, x.data(), y.data()), tol<T>(n));

        auto y1 = y, y2 = y;
        this->ref.axpy(n, T(0.37), x.data(), y1.data());
        fast.axpy(n, T(0.37), x.data(), y2.data());
        expect_close(y1, y2, tol<T>(1));

        auto g1 = y, g2 = y;
        this->ref.relu_backward(n, x.data(), g1.data());
        fast.relu_backward(n, x.data(), g2.data());
        EXPECT_EQ(g1, g2);
    }
}

TYPED_TEST(KernelEquivalence, RowOps) {
    using T = TypeParam;
    std::mt19937_64 rng(4);
    const auto& fast = this->simd();
    for (int rows : {1, 3, 46}) {
        for (int cols : {1, 8, 16, 13}) {
            const int ld = cols + 2;
            const auto bias = random_vec<T>(cols, rng);
            auto c1 = random_vec<T>(static_cast<std::size_t>(rows) * ld, rng);
            auto c2 = c1;
            this->ref.bias_relu(rows, cols, c1.data(), ld, bias.data());
            fast.bias_relu(rows, cols, c2.data(), ld, bias.data());
            EXPECT_EQ(c1, c2);

            auto a1 = random_vec<T>(cols, rng);
            auto a2 = a1;
            this->ref.add_rows(rows, cols, c1.data(), ld, a1.data());
            fast.add_rows(rows, cols, c1.data(), ld, a2.data());
            expect_close(a1, a2, tol<T>(rows));
        }
    }
}

}  // namespace

TEST(Dispatch, ScalarAlwaysAvailable) {
    EXPECT_TRUE(isa_supported(Isa::Scalar));
    EXPECT_EQ(kernels<float>(Isa::Scalar).isa, Isa::Scalar);
    const Isa before = active_isa();
    set_active_isa(Isa::Scalar);
    EXPECT_EQ(kernels<double>().isa, Isa::Scalar);
    set_active_isa(before);
    EXPECT_EQ(isa_name(Isa::Avx2), "avx2");
}

TEST(Dispatch, ReferenceGemmValues) {
    // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
    const double a[] = {1, 2, 3, 4}, b[] = {5, 6, 7, 8};
    for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
        if (!isa_supported(isa)) continue;
        double c[4] = {};
        kernels<double>(isa).gemm(2, 2, 2, a, 2, b, 2, c, 2, false);
        EXPECT_EQ(c[0], 19);
        EXPECT_EQ(c[1], 22);
        EXPECT_EQ(c[2], 43);
        EXPECT_EQ(c[3], 50);
        // Aᵀ B with A stored 2×2: [1 3; 2 4] * B = [26 30; 38 44]
        kernels<double>(isa).gemm_tn(2, 2, 2, a, 2, b, 2, c, 2, false);
        EXPECT_EQ(c[0], 26);
        EXPECT_EQ(c[1], 30);
        EXPECT_EQ(c[2], 38);
        EXPECT_EQ(c[3], 44);
    }
}
