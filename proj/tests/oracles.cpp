#include "oracles.hpp"

#include <algorithm>
#include <random>

namespace oracle {
namespace {

bool connected(const gcnn::Graph& g, const std::vector<int>& nodes) {
    std::vector<char> seen(nodes.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            if (!seen[b] && g.adjacent(nodes[a], nodes[b])) {
                seen[b] = 1;
                ++reached;
                stack.push_back(b);
            }
        }
    }
    return reached == nodes.size();
}

int classify(const gcnn::Graph& g, const std::vector<int>& nodes) {
    const int k = static_cast<int>(nodes.size());
    int edges = 0;
    int max_deg = 0;
    for (int a = 0; a < k; ++a) {
        int d = 0;
        for (int b = 0; b < k; ++b)
            if (a != b && g.adjacent(nodes[a], nodes[b])) ++d;
        edges += d;
        max_deg = std::max(max_deg, d);
    }
    edges /= 2;
    using P = gcnn::Pattern;
    P p = P::OtherFive;
    if (k == 3) p = edges == 3 ? P::Triangle : P::OpenTriangle;
    if (k == 4) {
        switch (edges) {
            case 3: p = max_deg == 3 ? P::ThreeStar : P::FourPath; break;
            case 4: p = max_deg == 3 ? P::TailedTriangle : P::FourCycle; break;
            case 5: p = P::Diamond; break;
            default: p = P::FourClique; break;
        }
    }
    if (k == 5) p = edges == 4 && max_deg == 2 ? P::FivePath : P::OtherFive;
    return static_cast<int>(p);
}

template <typename F>
void for_each_subset(int n, int k, F&& f) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::array<std::uint64_t, gcnn::kPatternCount> naive_counts(const gcnn::Graph& g, int k) {
    std::array<std::uint64_t, gcnn::kPatternCount> out{};
    for_each_subset(g.node_count(), k, [&](const std::vector<int>& s) {
        if (connected(g, s)) ++out[classify(g, s)];
    });
    return out;
}

std::uint64_t naive_connected_subsets(const gcnn::Graph& g, int k) {
    std::uint64_t n = 0;
    for_each_subset(g.node_count(), k, [&](const std::vector<int>& s) { n += connected(g, s) ? 1 : 0; });
    return n;
}

gcnn::Graph random_graph(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<gcnn::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v});
    return gcnn::Graph::from_edges(n, edges);
}

namespace {

std::vector<double> conv(const std::vector<double>& x, int side, const gcnn::ConvLayer<double>& l, FlopTally& t) {
    const int out = side - l.filter + 1;
    std::vector<double> y(static_cast<std::size_t>(out) * out * l.out_channels);
    for (int i = 0; i < out; ++i)
        for (int j = 0; j < out; ++j)
            for (int o = 0; o < l.out_channels; ++o) {
                double acc = 0.0;
                for (int di = 0; di < l.filter; ++di)
                    for (int dj = 0; dj < l.filter; ++dj)
                        for (int c = 0; c < l.in_channels; ++c) {
                            const double w = l.weights[((static_cast<std::size_t>(di) * l.filter + dj) * l.in_channels + c) *
                                                           l.out_channels + o];
                            acc += x[(static_cast<std::size_t>(i + di) * side + (j + dj)) * l.in_channels + c] * w;
                            ++t.mul;
                            ++t.add;
                        }
                acc += l.bias[o];
                ++t.add;
                y[(static_cast<std::size_t>(i) * out + j) * l.out_channels + o] = acc > 0.0 ? acc : 0.0;
            }
    return y;
}

}  // namespace

double instrumented_forward(const gcnn::CnnModel<double>& model, const gcnn::Tensor3<double>& x, FlopTally& t) {
    const auto& c = model.config;
    std::vector<double> in(x.values().begin(), x.values().end());
    const auto o1 = conv(in, c.input_dim, model.conv1, t);
    const auto o2 = conv(o1, c.side1(), model.conv2, t);
    double z = 0.0;
    for (std::size_t i = 0; i < o2.size(); ++i) {
        z += o2[i] * model.dense.weights[i];
        ++t.mul;
        ++t.add;
    }
    z += model.dense.bias;
    ++t.add;
    return c.output_relu ? std::max(0.0, z) : z;
}

}  // namespace oracle
