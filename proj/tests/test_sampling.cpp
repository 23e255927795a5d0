#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "gcnn/error.hpp"
#include "gcnn/exact.hpp"
#include "gcnn/sampling.hpp"
#include "oracles.hpp"

using namespace gcnn;

namespace {

Graph complete(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph::from_edges(n, e);
}

Graph star3() { return Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}}); }

Graph cycle(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
    return Graph::from_edges(n, e);
}

double l1(const Gfd& a, const std::map<Pattern, double>& b) {
    std::set<Pattern> keys;
    for (const auto& [p, _] : a) keys.insert(p);
    for (const auto& [p, _] : b) keys.insert(p);
    double d = 0;
    for (Pattern p : keys) {
        const double x = a.count(p) ? a.at(p) : 0.0;
        const double y = b.count(p) ? b.at(p) : 0.0;
        d += std::abs(x - y);
    }
    return d;
}

}  // namespace

TEST(EdgeSampling, FullPassIsExact) {
    OpCounter c;
    EXPECT_DOUBLE_EQ(estimate_edge_sampling(complete(4), Pattern::FourClique, 6, 0, c, EdgeSampling::FullPass).estimate, 1.0);
    const Graph p4 = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    EXPECT_DOUBLE_EQ(estimate_edge_sampling(p4, Pattern::FourPath, 3, 0, c, EdgeSampling::FullPass).estimate, 1.0);
    const Graph g = gen_er({25, 0.4, 2});
    const auto m = g.edge_count();
    EXPECT_DOUBLE_EQ(estimate_edge_sampling(g, Pattern::TailedTriangle, m, 0, c, EdgeSampling::FullPass).estimate,
                     static_cast<double>(count_exact(g, Pattern::TailedTriangle)));
}

TEST(EdgeSampling, Errors) {
    OpCounter c;
    EXPECT_THROW(estimate_edge_sampling(Graph(5), Pattern::Triangle, 3, 0, c), NoEdges);
    EXPECT_THROW(estimate_edge_sampling(complete(3), Pattern::Triangle, 0, 0, c), InvalidConfig);
}

TEST(EdgeSampling, Deterministic) {
    const Graph g = gen_er({30, 0.3, 1});
    OpCounter a, b;
    const auto r1 = estimate_edge_sampling(g, Pattern::FourClique, 50, 9, a);
    const auto r2 = estimate_edge_sampling(g, Pattern::FourClique, 50, 9, b);
    EXPECT_EQ(r1.estimate, r2.estimate);
    EXPECT_EQ(r1.ops, r2.ops);
    EXPECT_GT(r1.ops, 0u);
}

TEST(EdgeSampling, OpsStrictlyIncreaseWithBudget) {
    const Graph g = gen_er({30, 0.3, 1});
    std::uint64_t prev = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        OpCounter c;
        const auto r = estimate_edge_sampling(g, Pattern::FourClique, s, 5, c);
        EXPECT_GT(r.ops, prev);
        prev = r.ops;
    }
}

TEST(EdgeSampling, AbsentPatternIsExactlyZero) {
    OpCounter c;
    const Graph tree = star3();
    EXPECT_EQ(estimate_edge_sampling(tree, Pattern::Triangle, 10, 1, c).estimate, 0.0);
}

TEST(EdgeSampling, UnbiasedOnEr) {
    const Graph g = gen_er({30, 0.3, 12345});
    const std::uint64_t s = (g.edge_count() + 1) / 2;
    for (Pattern p : {Pattern::FourClique, Pattern::TailedTriangle}) {
        const double exact = static_cast<double>(count_exact(g, p));
        const int runs = 1000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < runs; ++i) {
            OpCounter c;
            const double e = estimate_edge_sampling(g, p, s, derive_seed(1, "unbiased", i), c).estimate;
            sum += e;
            sum2 += e * e;
        }
        const double mean = sum / runs;
        const double se = std::sqrt((sum2 / runs - mean * mean) / (runs - 1));
        EXPECT_NEAR(mean, exact, 3 * se) << pattern_name(p);
    }
}

TEST(Walk, NoSeed) {
    OpCounter c;
    EXPECT_THROW(GraphletWalk(Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}}), 1, c), NoSeedGraphlet);
}

TEST(Walk, StatesStayConnectedAndSized) {
    const Graph g = gen_er({20, 0.25, 4});
    OpCounter c;
    GraphletWalk w(g, 3, c);
    for (int i = 0; i < 5000; ++i) {
        w.step();
        const auto s = w.state();
        ASSERT_GE(s.size(), 3u);
        ASSERT_LE(s.size(), 5u);
        ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
        std::vector<int> nodes(s.begin(), s.end());
        ASSERT_GE(classify_code(induced_code(g, nodes), static_cast<int>(nodes.size())), 0);
    }
    EXPECT_GT(w.accepted(), 0u);
}

TEST(Gfd, TriangleOnly) {
    OpCounter c;
    const Gfd gfd = estimate_guise_gfd(complete(3), 1000, 10, 1, c);
    ASSERT_EQ(gfd.size(), 1u);
    EXPECT_DOUBLE_EQ(gfd.at(Pattern::Triangle), 1.0);
}

TEST(Gfd, StarGraph) {
    OpCounter c;
    const Gfd gfd = estimate_guise_gfd(star3(), 200000, 1000, 2, c);
    EXPECT_LE(l1(gfd, {{Pattern::OpenTriangle, 0.75}, {Pattern::ThreeStar, 0.25}}), 0.05);
}

TEST(Gfd, UniformOverStatesOnCycle) {
    // C6 has 6 connected sets of each size 3, 4 and 5: uniform means 1/18 each.
    const Graph g = cycle(6);
    OpCounter c;
    GraphletWalk w(g, 11, c);
    std::map<std::vector<int>, int> visits;
    const int steps = 300000;
    for (int i = 0; i < steps; ++i) {
        w.step();
        ++visits[std::vector<int>(w.state().begin(), w.state().end())];
    }
    ASSERT_EQ(visits.size(), 18u);
    double dist = 0;
    for (const auto& [s, n] : visits) dist += std::abs(static_cast<double>(n) / steps - 1.0 / 18);
    EXPECT_LT(dist, 0.03);
}

TEST(Gfd, MatchesExactOnEr) {
    const Graph g = gen_er({25, 0.3, 77});
    std::map<Pattern, double> exact;
    double total = 0;
    for (int k = 3; k <= 5; ++k) {
        const auto cv = count_all(g, k);
        for (Pattern p : patterns_of_size(k)) {
            if (cv[p] == 0) continue;
            exact[p] = static_cast<double>(cv[p]);
            total += static_cast<double>(cv[p]);
        }
    }
    for (auto& [p, v] : exact) v /= total;
    OpCounter c;
    EXPECT_LE(l1(estimate_guise_gfd(g, 200000, 20000, 5, c), exact), 0.05);
}

TEST(CountsFromGfd, Examples) {
    const auto est = counts_from_gfd({{Pattern::Triangle, 0.8}, {Pattern::FourClique, 0.2}}, Pattern::Triangle, 4);
    EXPECT_DOUBLE_EQ(est.at(Pattern::FourClique), 1.0);
    EXPECT_DOUBLE_EQ(est.at(Pattern::Triangle), 4.0);
    EXPECT_THROW(counts_from_gfd({{Pattern::FourClique, 1.0}}, Pattern::Triangle, 4), ZeroAnchorFrequency);
}

TEST(CountsFromGfd, FourCliqueOnEr) {
    const Graph g = gen_er({25, 0.3, 77});
    const double exact = static_cast<double>(count_exact(g, Pattern::FourClique));
    const double anchor = static_cast<double>(open_triangle_count_fast(g));
    double sum = 0;
    for (int run = 0; run < 30; ++run) {
        OpCounter c;
        const auto gfd = estimate_guise_gfd(g, 50000, 5000, derive_seed(3, "run", run), c);
        const auto est = counts_from_gfd(gfd, Pattern::OpenTriangle, anchor);
        sum += est.count(Pattern::FourClique) ? est.at(Pattern::FourClique) : 0.0;
    }
    EXPECT_NEAR(sum / 30, exact, 0.15 * exact);
}

TEST(McmcEstimator, AnchorPatternIsExact) {
    const Graph g = gen_er({20, 0.3, 1});
    const auto r = make_mcmc_estimator(Pattern::OpenTriangle)(g, 100, 1);
    EXPECT_DOUBLE_EQ(r.estimate, static_cast<double>(count_exact(g, Pattern::OpenTriangle)));
    EXPECT_GT(r.ops, 0u);
}

TEST(Tune, TargetMetAtBudgetOne) {
    std::vector<Graph> graphs{complete(4), complete(5)};
    const auto t = tune_budget_to_error(graphs, Pattern::Triangle, 0.1, make_mcmc_estimator(Pattern::Triangle), 64, 1);
    EXPECT_EQ(t.budget, 1u);
    EXPECT_FALSE(t.cap_reached);
}

TEST(Tune, ImpossibleTargetHitsCap) {
    std::vector<Graph> graphs{gen_er({30, 0.3, 1}), gen_er({30, 0.3, 2})};
    const auto t = tune_budget_to_error(graphs, Pattern::FourClique, 1e-4, make_edge_estimator(Pattern::FourClique), 4, 1);
    EXPECT_TRUE(t.cap_reached);
    EXPECT_EQ(t.budget, 4u);
    EXPECT_GT(t.achieved_error, 1.2e-4);
}

TEST(Tune, AchievesTarget) {
    std::vector<Graph> graphs;
    for (int i = 0; i < 20; ++i) graphs.push_back(gen_er({30, 0.3, static_cast<std::uint64_t>(100 + i)}));
    const double target = 0.2;
    const auto t = tune_budget_to_error(graphs, Pattern::FourClique, target, make_edge_estimator(Pattern::FourClique),
                                        4096, 7);
    EXPECT_FALSE(t.cap_reached);
    EXPECT_LE(t.achieved_error, 1.2 * target);
    EXPECT_GT(t.mean_ops, 0.0);
    EXPECT_EQ(t.estimates.size(), graphs.size());
}
