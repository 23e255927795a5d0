#include "gcnn/graph.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gcnn/error.hpp"
#include "gcnn/rng.hpp"

namespace gcnn {

Graph::Graph(int node_count) : n_(node_count), adj_(static_cast<std::size_t>(node_count) * node_count, 0) {
    if (node_count < 0) throw InvalidConfig("negative node count");
    nbrs_.resize(node_count);
}

Graph Graph::from_edges(int node_count, std::span<const Edge> edges) {
    Graph g(node_count);
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
            throw ParseError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") out of range for " + std::to_string(node_count) + " nodes");
        if (e.u == e.v) throw ParseError("self-loop at node " + std::to_string(e.u));
        g.adj_[static_cast<std::size_t>(e.u) * node_count + e.v] = 1;
        g.adj_[static_cast<std::size_t>(e.v) * node_count + e.u] = 1;
    }
    g.rebuild_from_adjacency();
    return g;
}

Graph Graph::from_adjacency(int node_count, std::span<const std::uint8_t> adjacency) {
    const auto n = static_cast<std::size_t>(node_count);
    if (adjacency.size() != n * n) throw ShapeMismatch("adjacency size does not match node count");
    Graph g(node_count);
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency[i * n + i] != 0) throw ParseError("nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            const bool a = adjacency[i * n + j] != 0;
            if (a != (adjacency[j * n + i] != 0)) throw ParseError("asymmetric adjacency");
            g.adj_[i * n + j] = a ? 1 : 0;
        }
    }
    g.rebuild_from_adjacency();
    return g;
}

void Graph::rebuild_from_adjacency() {
    edges_.clear();
    for (auto& l : nbrs_) l.clear();
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (!adjacent(i, j)) continue;
            nbrs_[i].push_back(j);
            if (i < j) edges_.push_back({i, j});
        }
    }
}

Graph Graph::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_) throw ShapeMismatch("permutation length");
    Graph g(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            g.adj_[static_cast<std::size_t>(perm[i]) * n_ + perm[j]] = adj_[static_cast<std::size_t>(i) * n_ + j];
    g.rebuild_from_adjacency();
    return g;
}

void PaddedMatrix::swap_indices(int i, int j) {
    if (i == j) return;
    const auto n = static_cast<std::size_t>(dim_);
    for (std::size_t c = 0; c < n; ++c) std::swap(values_[i * n + c], values_[j * n + c]);
    for (std::size_t r = 0; r < n; ++r) std::swap(values_[r * n + i], values_[r * n + j]);
}

Graph PaddedMatrix::to_graph() const { return Graph::from_adjacency(dim_, values_); }

PaddedMatrix pad_to(const Graph& g, int dim) {
    const int n = g.node_count();
    if (dim < n)
        throw DimensionTooSmall("pad dimension " + std::to_string(dim) + " < node count " + std::to_string(n));
    PaddedMatrix mx;
    mx.dim_ = dim;
    mx.original_ = n;
    mx.values_.assign(static_cast<std::size_t>(dim) * dim, 0);
    for (const Edge& e : g.edges()) {
        mx.values_[static_cast<std::size_t>(e.u) * dim + e.v] = 1;
        mx.values_[static_cast<std::size_t>(e.v) * dim + e.u] = 1;
    }
    return mx;
}

std::vector<PaddedMatrix> swap_augment(const PaddedMatrix& mx, int m, std::uint64_t seed) {
    std::vector<PaddedMatrix> out;
    if (m <= 0) return out;
    out.reserve(m);
    const int n = mx.dim();
    Rng rng(seed);
    PaddedMatrix current = mx;
    for (int k = 0; k < m; ++k) {
        if (n >= 2) {
            const int i = static_cast<int>(rng.below(n));
            int j = static_cast<int>(rng.below(n - 1));
            if (j >= i) ++j;
            current.swap_indices(i, j);
        }
        out.push_back(current);
    }
    return out;
}

void validate(const ErConfig& cfg) {
    if (cfg.n < 0) throw InvalidConfig("ER: n must be >= 0");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw InvalidConfig("ER: p must lie in [0,1]");
}

void validate(const RggConfig& cfg) {
    if (cfg.n < 0) throw InvalidConfig("RGG: n must be >= 0");
    if (!(cfg.r >= 0.0)) throw InvalidConfig("RGG: r must be >= 0");
    if (cfg.dim != 2 && cfg.dim != 3) throw InvalidConfig("RGG: dim must be 2 or 3");
}

Graph gen_er(const ErConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    std::vector<Edge> edges;
    for (int i = 0; i < cfg.n; ++i)
        for (int j = i + 1; j < cfg.n; ++j)
            if (rng.bernoulli(cfg.p)) edges.push_back({i, j});
    return Graph::from_edges(cfg.n, edges);
}

Graph gen_rgg(const RggConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    std::vector<double> pts(static_cast<std::size_t>(cfg.n) * cfg.dim);
    for (double& x : pts) x = rng.uniform01();
    const double r2 = cfg.r * cfg.r;
    std::vector<Edge> edges;
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j) {
            double d2 = 0.0;
            for (int c = 0; c < cfg.dim; ++c) {
                const double d = pts[static_cast<std::size_t>(i) * cfg.dim + c] - pts[static_cast<std::size_t>(j) * cfg.dim + c];
                d2 += d * d;
            }
            if (d2 <= r2) edges.push_back({i, j});
        }
    }
    return Graph::from_edges(cfg.n, edges);
}

}  // namespace gcnn
