#include "gcnn/pattern.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "gcnn/error.hpp"

namespace gcnn {
namespace {

constexpr std::array<std::string_view, kPatternCount> kNames = {
    "Triangle", "OpenTriangle", "FourPath", "ThreeStar", "FourCycle",
    "TailedTriangle", "Diamond", "FourClique", "FivePath", "OtherFive",
};

constexpr std::array<Pattern, 2> kSize3 = {Pattern::Triangle, Pattern::OpenTriangle};
constexpr std::array<Pattern, 6> kSize4 = {Pattern::FourPath,       Pattern::ThreeStar, Pattern::FourCycle,
                                           Pattern::TailedTriangle, Pattern::Diamond,   Pattern::FourClique};
constexpr std::array<Pattern, 2> kSize5 = {Pattern::FivePath, Pattern::OtherFive};

std::vector<Edge> template_edges(Pattern p) {
    switch (p) {
        case Pattern::Triangle: return {{0, 1}, {0, 2}, {1, 2}};
        case Pattern::OpenTriangle: return {{0, 1}, {1, 2}};
        case Pattern::FourPath: return {{0, 1}, {1, 2}, {2, 3}};
        case Pattern::ThreeStar: return {{0, 1}, {0, 2}, {0, 3}};
        case Pattern::FourCycle: return {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
        case Pattern::TailedTriangle: return {{0, 1}, {0, 2}, {1, 2}, {2, 3}};
        case Pattern::Diamond: return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
        case Pattern::FourClique: return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        case Pattern::FivePath: return {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
        case Pattern::OtherFive: break;
    }
    throw UnknownPattern("OtherFive has no single representative");
}

int pair_index(int i, int j, int k) {
    // Index of pair (i<j) in the row-major upper-triangle order.
    return i * k - i * (i + 1) / 2 + (j - i - 1);
}

bool code_connected(std::uint32_t code, int k) {
    unsigned seen = 1u;
    unsigned frontier = 1u;
    while (frontier) {
        unsigned next = 0;
        for (int a = 0; a < k; ++a) {
            if (!(frontier >> a & 1u)) continue;
            for (int b = 0; b < k; ++b) {
                if (a == b || (seen >> b & 1u)) continue;
                const int idx = a < b ? pair_index(a, b, k) : pair_index(b, a, k);
                if (code >> idx & 1u) next |= 1u << b;
            }
        }
        seen |= next;
        frontier = next;
    }
    return seen == (1u << k) - 1;
}

struct ClassTable {
    std::array<std::vector<std::int8_t>, 6> by_k;  // index k; code -> pattern or -1

    ClassTable() {
        for (int k = 3; k <= 5; ++k) {
            const std::uint32_t codes = 1u << (k * (k - 1) / 2);
            std::vector<std::int8_t> table(codes, -1);
            std::vector<std::pair<std::uint32_t, Pattern>> reps;
            for (Pattern p : patterns_of_size(k)) {
                if (p == Pattern::OtherFive) continue;
                const Graph g = pattern_graph(p);
                reps.emplace_back(canonical_code(adjacency_code(g.adjacency(), k), k), p);
            }
            for (std::uint32_t c = 0; c < codes; ++c) {
                if (!code_connected(c, k)) continue;
                const std::uint32_t canon = canonical_code(c, k);
                auto it = std::find_if(reps.begin(), reps.end(), [&](const auto& r) { return r.first == canon; });
                table[c] = static_cast<std::int8_t>(it != reps.end() ? it->second : Pattern::OtherFive);
            }
            by_k[k] = std::move(table);
        }
    }
};

const ClassTable& class_table() {
    static const ClassTable table;
    return table;
}

void check_size(int k) {
    if (k < 3 || k > 5) throw UnknownPattern("graphlet size " + std::to_string(k) + " outside [3,5]");
}

}  // namespace

std::string_view pattern_name(Pattern p) { return kNames[static_cast<std::size_t>(p)]; }

Pattern parse_pattern(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return static_cast<Pattern>(i);
    throw UnknownPattern("unknown pattern name '" + std::string(name) + "'");
}

int pattern_size(Pattern p) {
    switch (p) {
        case Pattern::Triangle:
        case Pattern::OpenTriangle: return 3;
        case Pattern::FivePath:
        case Pattern::OtherFive: return 5;
        default: return 4;
    }
}

int pattern_edge_count(Pattern p) { return static_cast<int>(template_edges(p).size()); }

std::span<const Pattern> patterns_of_size(int k) {
    switch (k) {
        case 3: return kSize3;
        case 4: return kSize4;
        case 5: return kSize5;
        default: check_size(k);
    }
    return {};
}

Graph pattern_graph(Pattern p) {
    const auto edges = template_edges(p);
    return Graph::from_edges(pattern_size(p), edges);
}

std::uint32_t adjacency_code(std::span<const std::uint8_t> adj, int k) {
    std::uint32_t code = 0;
    int bit = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++bit)
            if (adj[static_cast<std::size_t>(i) * k + j]) code |= 1u << bit;
    return code;
}

std::uint32_t canonical_code(std::uint32_t code, int k) {
    std::array<int, 5> perm{};
    std::iota(perm.begin(), perm.begin() + k, 0);
    std::uint32_t best = ~0u;
    do {
        std::uint32_t c = 0;
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                if (!(code >> pair_index(i, j, k) & 1u)) continue;
                const int a = std::min(perm[i], perm[j]);
                const int b = std::max(perm[i], perm[j]);
                c |= 1u << pair_index(a, b, k);
            }
        }
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
    return best;
}

int classify_code(std::uint32_t code, int k) { return class_table().by_k[k][code]; }

Pattern classify(std::span<const std::uint8_t> adj, int k) {
    check_size(k);
    if (adj.size() != static_cast<std::size_t>(k) * k) throw ShapeMismatch("classify expects a k×k matrix");
    const int cls = classify_code(adjacency_code(adj, k), k);
    if (cls < 0) throw Disconnected("induced subgraph is not connected");
    return static_cast<Pattern>(cls);
}

Pattern classify_by_degrees(std::span<const std::uint8_t> adj, int k) {
    if (k < 3 || k > 4) throw UnknownPattern("degree classification covers k = 3 and 4 only");
    if (adj.size() != static_cast<std::size_t>(k) * k) throw ShapeMismatch("classify expects a k×k matrix");
    std::array<int, 4> deg{};
    int edges2 = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (adj[static_cast<std::size_t>(i) * k + j]) ++deg[i], ++edges2;
    const int m = edges2 / 2;
    if (std::any_of(deg.begin(), deg.begin() + k, [](int d) { return d == 0; }))
        throw Disconnected("isolated node in induced subgraph");
    std::sort(deg.begin(), deg.begin() + k);
    if (k == 3) {
        if (m == 3) return Pattern::Triangle;
        if (m == 2) return Pattern::OpenTriangle;
        throw Disconnected("3-node subgraph with fewer than 2 edges");
    }
    switch (m) {
        case 3:
            if (deg[3] == 3) return Pattern::ThreeStar;
            if (deg[0] == 1 && deg[1] == 1) return Pattern::FourPath;
            break;  // triangle plus isolated node is caught above
        case 4:
            return deg[3] == 3 ? Pattern::TailedTriangle : Pattern::FourCycle;
        case 5: return Pattern::Diamond;
        case 6: return Pattern::FourClique;
        default: break;
    }
    throw Disconnected("4-node induced subgraph is not connected");
}

}  // namespace gcnn
