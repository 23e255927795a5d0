#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gcnn {

/// Seedable generator used by every randomized operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The conversions to doubles and bounded integers are done here
/// rather than through <random> distributions, whose algorithms differ
/// between standard libraries; results are therefore identical on every
/// platform for a given seed.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform01() < p; }

    // UniformRandomBitGenerator, so std::shuffle-style helpers can take it.
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates with Rng::below; std::shuffle's draw pattern is unspecified.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = rng.below(i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

/// Stream splitting: a child seed is a SplitMix64 mix of the parent seed, a
/// 64-bit FNV-1a hash of the stream name, and an index. Distinct (name, index)
/// pairs give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view stream, std::uint64_t index = 0);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gcnn
