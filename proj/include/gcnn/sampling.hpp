#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gcnn/graph.hpp"
#include "gcnn/op_counter.hpp"
#include "gcnn/pattern.hpp"
#include "gcnn/rng.hpp"

namespace gcnn {

struct EstimateResult {
    double estimate = 0.0;
    std::uint64_t ops = 0;     // comparisons consumed by this call
    std::uint64_t budget = 0;  // edges sampled or walk steps
    std::uint64_t seed = 0;
};

enum class EdgeSampling {
    WithReplacement,
    FullPass,  // edge i of the budget is edges()[i % m]; exact when budget is a multiple of m
};

/// Edge-sampling estimator: draws `samples` edges and scales the mean
/// per-edge local count, estimate = (m/s) * sum c_e / q. Unbiased under
/// WithReplacement. Throws NoEdges, InvalidConfig when samples == 0.
EstimateResult estimate_edge_sampling(const Graph& g, Pattern p, std::uint64_t samples, std::uint64_t seed,
                                      OpCounter& counter, EdgeSampling mode = EdgeSampling::WithReplacement);

/// Relative visit frequency per pattern class.
using Gfd = std::map<Pattern, double>;

struct WalkConfig {
    int min_size = 3;
    int max_size = 5;
};

/// Metropolis-Hastings walk over connected induced subgraphs with
/// min_size..max_size nodes. Moves: swap one member, grow by one, shrink by
/// one, each keeping the set connected. Accepting with
/// min(1, |N(current)| / |N(proposed)|) makes the stationary distribution
/// uniform over all such subgraphs.
class GraphletWalk {
public:
    /// Throws NoSeedGraphlet when no connected min_size-subset exists.
    GraphletWalk(const Graph& g, std::uint64_t seed, OpCounter& counter, WalkConfig cfg = {});

    void step();

    /// Current node set, sorted ascending.
    std::span<const int> state() const { return {state_.nodes.data(), static_cast<std::size_t>(state_.size)}; }
    Pattern pattern() const { return pattern_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t accepted() const { return accepted_; }

private:
    struct State {
        std::array<int, 8> nodes{};
        int size = 0;
    };

    bool connected(const State& s);
    // Appends neighbors to `out` when non-null; returns the neighbor count.
    std::size_t neighbors(const State& s, std::vector<State>* out);
    void classify_current();

    const Graph& g_;
    WalkConfig cfg_;
    OpCounter& ops_;
    Rng rng_;
    State state_;
    Pattern pattern_ = Pattern::Triangle;
    std::size_t degree_ = 0;
    std::vector<State> scratch_;
    std::vector<char> in_state_;
    std::uint64_t steps_ = 0;
    std::uint64_t accepted_ = 0;
};

/// Post-burn-in visit frequencies of `steps` walk steps. Throws
/// NoSeedGraphlet, InvalidConfig when steps == 0.
Gfd estimate_guise_gfd(const Graph& g, std::uint64_t steps, std::uint64_t burn_in, std::uint64_t seed,
                       OpCounter& counter, WalkConfig cfg = {});

/// estimate(p) = gfd[p] / gfd[anchor] * anchor_count for every p in gfd.
/// Throws ZeroAnchorFrequency.
std::map<Pattern, double> counts_from_gfd(const Gfd& gfd, Pattern anchor, double anchor_count);

/// Budget-parameterized count estimator for one pattern.
using Estimator = std::function<EstimateResult(const Graph&, std::uint64_t budget, std::uint64_t seed)>;

Estimator make_edge_estimator(Pattern p, EdgeSampling mode = EdgeSampling::WithReplacement);

/// Walk-based count estimator: `budget` recorded steps after budget/10
/// burn-in steps, converted to a count through whichever 3-node pattern has
/// the larger exact count (computed with the closed-form routes, whose
/// comparisons are charged to the estimate).
Estimator make_mcmc_estimator(Pattern p, WalkConfig cfg = {});

struct TuneResult {
    std::uint64_t budget = 0;
    double achieved_error = 0.0;
    double mean_ops = 0.0;  // comparisons per graph at the chosen budget
    bool cap_reached = false;
    std::vector<double> estimates;
};

/// Doubling search over budgets 1, 2, 4, ... up to cap for the smallest budget
/// whose relative error over `graphs` is at most (1 + tolerance) * target,
/// refined by bisection. cap_reached is set when even `cap` misses.
TuneResult tune_budget_to_error(std::span<const Graph> graphs, std::span<const double> truths, double target,
                                const Estimator& estimator, std::uint64_t cap, std::uint64_t seed,
                                double tolerance = 0.2);

/// Same, with truths from count_exact.
TuneResult tune_budget_to_error(std::span<const Graph> graphs, Pattern p, double target, const Estimator& estimator,
                                std::uint64_t cap, std::uint64_t seed, double tolerance = 0.2);

}  // namespace gcnn
