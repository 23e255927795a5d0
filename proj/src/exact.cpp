#include "gcnn/exact.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gcnn/error.hpp"

namespace gcnn {

std::uint64_t CountVector::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::vector<std::vector<int>> enumerate_connected_induced(const Graph& g, int k) {
    std::vector<std::vector<int>> out;
    for_each_connected_induced(g, k, [&](std::span<const int> nodes) {
        std::vector<int> s(nodes.begin(), nodes.end());
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    });
    return out;
}

std::uint32_t induced_code(const Graph& g, std::span<const int> nodes) {
    const int k = static_cast<int>(nodes.size());
    std::uint32_t code = 0;
    int bit = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++bit)
            if (g.adjacent(nodes[i], nodes[j])) code |= 1u << bit;
    return code;
}

CountVector count_all(const Graph& g, int k) {
    if (k < 3 || k > 5) throw UnknownPattern("count_all supports k in [3,5]");
    CountVector cv;
    cv.k = k;
    for_each_connected_induced(g, k, [&](std::span<const int> nodes) {
        const int cls = classify_code(induced_code(g, nodes), k);
        ++cv.counts[static_cast<std::size_t>(cls)];
    });
    return cv;
}

std::uint64_t count_exact(const Graph& g, Pattern p) { return count_all(g, pattern_size(p))[p]; }

std::uint64_t triangle_count_fast(const Graph& g, OpCounter* counter) {
    std::uint64_t t = 0;
    std::uint64_t tests = 0;
    for (const Edge& e : g.edges()) {
        for (int w : g.neighbors(e.v)) {
            ++tests;
            if (w <= e.v) continue;
            ++tests;
            if (g.adjacent(e.u, w)) ++t;
        }
    }
    if (counter) counter->add(tests);
    return t;
}

std::uint64_t open_triangle_count_fast(const Graph& g, OpCounter* counter) {
    std::uint64_t wedges = 0;
    for (int v = 0; v < g.node_count(); ++v) {
        const std::uint64_t d = g.degree(v);
        wedges += d * (d - (d > 0 ? 1 : 0)) / 2;
    }
    return wedges - 3 * triangle_count_fast(g, counter);
}

namespace {

// Enumerates connected induced supersets of a connected seed set through the
// same exclusive-neighborhood growth as ESU, without the smallest-root rule.
class SeededEnumerator {
public:
    SeededEnumerator(const Graph& g, int k, OpCounter& ops) : g_(g), k_(k), ops_(ops), mark_(g.node_count(), 0), seen_(g.node_count(), 0), ext_(k + 1) {}

    template <typename Visit>
    void run(std::span<const int> seed, Visit&& visit) {
        const int s = static_cast<int>(seed.size());
        std::copy(seed.begin(), seed.end(), sub_.begin());
        for (int x : seed) bump(x, +1);
        if (s == k_) {
            visit(std::span<const int>(sub_.data(), k_));
        } else {
            auto& ext = ext_[s];
            ext.clear();
            for (int x : seed) seen_[x] = 1;
            for (int x : seed) {
                for (int u : g_.neighbors(x)) {
                    ops_.add();
                    if (seen_[u]) continue;
                    seen_[u] = 1;
                    ext.push_back(u);
                }
            }
            for (int x : seed) seen_[x] = 0;
            for (int u : ext) seen_[u] = 0;
            extend(s, visit);
        }
        for (int x : seed) bump(x, -1);
    }

private:
    void bump(int w, int delta) {
        mark_[w] += delta;
        for (int u : g_.neighbors(w)) mark_[u] += delta;
    }

    template <typename Visit>
    void extend(int size, Visit& visit) {
        auto& ext = ext_[size];
        while (!ext.empty()) {
            const int w = ext.back();
            ext.pop_back();
            sub_[size] = w;
            if (size + 1 == k_) {
                visit(std::span<const int>(sub_.data(), k_));
                continue;
            }
            auto& next = ext_[size + 1];
            next.assign(ext.begin(), ext.end());
            for (int u : g_.neighbors(w)) {
                ops_.add();
                if (mark_[u] == 0) next.push_back(u);
            }
            bump(w, +1);
            extend(size + 1, visit);
            bump(w, -1);
        }
    }

    const Graph& g_;
    int k_;
    OpCounter& ops_;
    std::vector<int> mark_;
    std::vector<char> seen_;
    std::vector<std::vector<int>> ext_;
    std::array<int, 8> sub_{};
};

}  // namespace

std::uint64_t per_edge_count(const Graph& g, Edge e, Pattern p, OpCounter* counter) {
    pattern_edge_count(p);  // rejects OtherFive
    const int n = g.node_count();
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v || !g.adjacent(e.u, e.v))
        throw NotAnEdge("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not an edge");
    OpCounter local;
    OpCounter& ops = counter ? *counter : local;
    const int k = pattern_size(p);
    const int target = static_cast<int>(p);
    std::uint64_t hits = 0;
    const std::array<int, 2> seed{e.u, e.v};
    SeededEnumerator en(g, k, ops);
    en.run(seed, [&](std::span<const int> nodes) {
        // Pairs among the k nodes, minus the seed edge already known present.
        ops.add(static_cast<std::uint64_t>(k * (k - 1) / 2 - 1));
        ops.add();  // class comparison
        if (classify_code(induced_code(g, nodes), k) == target) ++hits;
    });
    return hits;
}

}  // namespace gcnn
