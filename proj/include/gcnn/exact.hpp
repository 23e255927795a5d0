#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "gcnn/graph.hpp"
#include "gcnn/op_counter.hpp"
#include "gcnn/pattern.hpp"

namespace gcnn {

/// Per-pattern counts for every pattern of one size k.
struct CountVector {
    int k = 0;
    std::array<std::uint64_t, kPatternCount> counts{};

    std::uint64_t operator[](Pattern p) const { return counts[static_cast<std::size_t>(p)]; }
    std::uint64_t total() const;
    friend bool operator==(const CountVector&, const CountVector&) = default;
};

namespace detail {

// ESU: each connected induced k-subset is grown from its smallest node,
// extending only through nodes outside the closed neighborhood of the
// current subset. mark[x] > 0 iff x is in the subset or adjacent to it.
template <typename Visit>
class Esu {
public:
    Esu(const Graph& g, int k, Visit& visit) : g_(g), k_(k), visit_(visit), mark_(g.node_count(), 0), ext_(k + 1) {}

    void run() {
        for (int v = 0; v < g_.node_count(); ++v) {
            root_ = v;
            sub_[0] = v;
            if (k_ == 1) {
                visit_(std::span<const int>(sub_.data(), 1));
                continue;
            }
            auto& ext = ext_[1];
            ext.clear();
            for (int u : g_.neighbors(v))
                if (u > v) ext.push_back(u);
            bump(v, +1);
            extend(1);
            bump(v, -1);
        }
    }

private:
    void bump(int w, int delta) {
        mark_[w] += delta;
        for (int u : g_.neighbors(w)) mark_[u] += delta;
    }

    void extend(int size) {
        auto& ext = ext_[size];
        while (!ext.empty()) {
            const int w = ext.back();
            ext.pop_back();
            sub_[size] = w;
            if (size + 1 == k_) {
                visit_(std::span<const int>(sub_.data(), k_));
                continue;
            }
            auto& next = ext_[size + 1];
            next.assign(ext.begin(), ext.end());
            for (int u : g_.neighbors(w))
                if (mark_[u] == 0 && u > root_) next.push_back(u);
            bump(w, +1);
            extend(size + 1);
            bump(w, -1);
        }
    }

    const Graph& g_;
    int k_;
    Visit& visit_;
    std::vector<int> mark_;
    std::vector<std::vector<int>> ext_;
    std::array<int, 8> sub_{};
    int root_ = 0;
};

}  // namespace detail

/// Calls visit(std::span<const int>) once per connected induced k-subset.
/// Requires 1 <= k <= 8; graphs with fewer than k nodes yield nothing.
template <typename Visit>
void for_each_connected_induced(const Graph& g, int k, Visit&& visit) {
    if (k < 1 || k > 8 || g.node_count() < k) return;
    detail::Esu<std::remove_reference_t<Visit>> esu(g, k, visit);
    esu.run();
}

/// Materialized form of for_each_connected_induced; subsets are sorted.
std::vector<std::vector<int>> enumerate_connected_induced(const Graph& g, int k);

/// Adjacency code (see adjacency_code) of the subgraph induced by `nodes`.
std::uint32_t induced_code(const Graph& g, std::span<const int> nodes);

/// One enumeration pass classifying every connected induced k-subset.
/// Throws UnknownPattern for k outside [3,5].
CountVector count_all(const Graph& g, int k);

std::uint64_t count_exact(const Graph& g, Pattern p);

/// Triangles via an ordered edge/neighbor scan. Adjacency tests are tallied
/// into `counter` when given.
std::uint64_t triangle_count_fast(const Graph& g, OpCounter* counter = nullptr);

/// Induced 2-paths: sum over nodes of C(deg, 2) minus three per triangle.
std::uint64_t open_triangle_count_fast(const Graph& g, OpCounter* counter = nullptr);

/// Induced occurrences of p that contain both endpoints of e (the edge is then
/// part of the occurrence). Summed over all edges this equals q * count_exact.
/// Throws NotAnEdge, and UnknownPattern for OtherFive.
std::uint64_t per_edge_count(const Graph& g, Edge e, Pattern p, OpCounter* counter = nullptr);

}  // namespace gcnn
