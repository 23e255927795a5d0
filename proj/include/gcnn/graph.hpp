#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gcnn {

struct Edge {
    int u = 0;
    int v = 0;  // u < v for edges owned by a Graph
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph. Immutable once built; adjacency is a dense n×n
/// byte matrix (the graphs in scope have at most a few hundred nodes) plus
/// sorted neighbor lists.
class Graph {
public:
    Graph() = default;
    explicit Graph(int node_count);

    /// Duplicate edges (in either orientation) collapse. Throws ParseError on
    /// self-loops or out-of-range endpoints.
    static Graph from_edges(int node_count, std::span<const Edge> edges);

    /// Requires a symmetric, zero-diagonal 0/1 matrix in row-major order.
    static Graph from_adjacency(int node_count, std::span<const std::uint8_t> adjacency);

    int node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool adjacent(int a, int b) const { return adj_[static_cast<std::size_t>(a) * n_ + b] != 0; }
    std::span<const int> neighbors(int v) const { return nbrs_[v]; }
    int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }

    /// Lexicographically sorted, u < v.
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const std::uint8_t> adjacency() const { return adj_; }

    /// Relabels node i as perm[i]. perm must be a permutation of [0, n).
    Graph permuted(std::span<const int> perm) const;

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

private:
    void rebuild_from_adjacency();

    int n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<int>> nbrs_;
    std::vector<Edge> edges_;
};

/// An adjacency matrix embedded in the top-left of an N×N zero matrix.
class PaddedMatrix {
public:
    PaddedMatrix() = default;

    int dim() const { return dim_; }
    int original_node_count() const { return original_; }
    std::uint8_t at(int i, int j) const { return values_[static_cast<std::size_t>(i) * dim_ + j]; }
    std::span<const std::uint8_t> values() const { return values_; }

    /// Exchanges rows i,j and then columns i,j.
    void swap_indices(int i, int j);

    /// The graph on all N indices; padded rows become isolated nodes.
    Graph to_graph() const;

    friend bool operator==(const PaddedMatrix&, const PaddedMatrix&) = default;

private:
    friend PaddedMatrix pad_to(const Graph& g, int dim);

    int dim_ = 0;
    int original_ = 0;
    std::vector<std::uint8_t> values_;
};

/// Throws DimensionTooSmall when dim < g.node_count().
PaddedMatrix pad_to(const Graph& g, int dim);

/// m successive random row/column transpositions, each applied to the
/// previous output. Indices are drawn from the full padded range [0, N).
std::vector<PaddedMatrix> swap_augment(const PaddedMatrix& mx, int m, std::uint64_t seed);

struct ErConfig {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

struct RggConfig {
    int n = 0;
    double r = 0.0;
    int dim = 3;
    std::uint64_t seed = 0;
};

/// Each unordered pair (i<j, visited in lexicographic order) is an edge with
/// probability p.
Graph gen_er(const ErConfig& cfg);

/// n points uniform in [0,1]^dim; (u,v) is an edge iff distance <= r.
Graph gen_rgg(const RggConfig& cfg);

void validate(const ErConfig& cfg);
void validate(const RggConfig& cfg);

}  // namespace gcnn
