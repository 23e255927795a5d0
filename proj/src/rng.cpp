#include "gcnn/rng.hpp"

namespace gcnn {

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection on the top of the range keeps the result unbiased.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view stream, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(parent ^ h) + splitmix64(index));
}

}  // namespace gcnn
