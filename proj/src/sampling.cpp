#include "gcnn/sampling.hpp"

#include <algorithm>
#include <string>

#include "gcnn/error.hpp"
#include "gcnn/exact.hpp"
#include "gcnn/metrics.hpp"

namespace gcnn {

EstimateResult estimate_edge_sampling(const Graph& g, Pattern p, std::uint64_t samples, std::uint64_t seed,
                                      OpCounter& counter, EdgeSampling mode) {
    if (samples == 0) throw InvalidConfig("edge sampling needs at least one sample");
    const auto& edges = g.edges();
    if (edges.empty()) throw NoEdges("graph has no edges to sample");
    const int q = pattern_edge_count(p);
    const std::uint64_t m = edges.size();
    const std::uint64_t before = counter.comparisons();

    Rng rng(seed);
    std::uint64_t local_sum = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t idx = mode == EdgeSampling::FullPass ? i % m : rng.below(m);
        local_sum += per_edge_count(g, edges[idx], p, &counter);
    }
    EstimateResult r;
    r.estimate = static_cast<double>(m) / static_cast<double>(samples) * static_cast<double>(local_sum) / q;
    r.ops = counter.comparisons() - before;
    r.budget = samples;
    r.seed = seed;
    return r;
}

GraphletWalk::GraphletWalk(const Graph& g, std::uint64_t seed, OpCounter& counter, WalkConfig cfg)
    : g_(g), cfg_(cfg), ops_(counter), rng_(seed), in_state_(g.node_count(), 0) {
    if (cfg.min_size < 3 || cfg.max_size > 5 || cfg.min_size > cfg.max_size)
        throw InvalidConfig("walk sizes must satisfy 3 <= min_size <= max_size <= 5");

    // Start from the first node with two neighbors, then grow by smallest
    // adjacent node until min_size is reached.
    const int n = g.node_count();
    for (int v = 0; v < n && state_.size == 0; ++v) {
        if (g.degree(v) < 2) continue;
        State s;
        s.nodes[0] = v;
        s.nodes[1] = g.neighbors(v)[0];
        s.nodes[2] = g.neighbors(v)[1];
        s.size = 3;
        while (s.size < cfg.min_size) {
            int add = -1;
            for (int u = 0; u < n && add < 0; ++u) {
                if (std::find(s.nodes.begin(), s.nodes.begin() + s.size, u) != s.nodes.begin() + s.size) continue;
                for (int i = 0; i < s.size; ++i)
                    if (g.adjacent(u, s.nodes[i])) {
                        add = u;
                        break;
                    }
            }
            if (add < 0) break;
            s.nodes[s.size++] = add;
        }
        if (s.size < cfg.min_size) continue;
        std::sort(s.nodes.begin(), s.nodes.begin() + s.size);
        state_ = s;
    }
    if (state_.size == 0) throw NoSeedGraphlet("no connected " + std::to_string(cfg.min_size) + "-node subgraph");
    classify_current();
}

bool GraphletWalk::connected(const State& s) {
    unsigned seen = 1u;
    unsigned frontier = 1u;
    const unsigned all = (1u << s.size) - 1;
    while (frontier && seen != all) {
        unsigned next = 0;
        for (int a = 0; a < s.size; ++a) {
            if (!(frontier >> a & 1u)) continue;
            for (int b = 0; b < s.size; ++b) {
                if (seen >> b & 1u || next >> b & 1u) continue;
                ops_.add();
                if (g_.adjacent(s.nodes[a], s.nodes[b])) next |= 1u << b;
            }
        }
        seen |= next;
        frontier = next;
    }
    return seen == all;
}

namespace {

void insert_sorted(std::array<int, 8>& nodes, int& size, int v) {
    int i = size++;
    while (i > 0 && nodes[i - 1] > v) {
        nodes[i] = nodes[i - 1];
        --i;
    }
    nodes[i] = v;
}

}  // namespace

std::size_t GraphletWalk::neighbors(const State& s, std::vector<State>* out) {
    const int n = g_.node_count();
    std::size_t count = 0;
    for (int i = 0; i < s.size; ++i) in_state_[s.nodes[i]] = 1;

    auto without = [&](int i) {
        State r;
        for (int j = 0, t = 0; j < s.size; ++j)
            if (j != i) r.nodes[t++] = s.nodes[j];
        r.size = s.size - 1;
        return r;
    };
    // Is v adjacent to any member of r?
    auto touches = [&](const State& r, int v) {
        for (int j = 0; j < r.size; ++j) {
            ops_.add();
            if (g_.adjacent(v, r.nodes[j])) return true;
        }
        return false;
    };

    if (s.size > cfg_.min_size) {
        for (int i = 0; i < s.size; ++i) {
            const State r = without(i);
            if (!connected(r)) continue;
            ++count;
            if (out) out->push_back(r);
        }
    }
    if (s.size < cfg_.max_size) {
        for (int v = 0; v < n; ++v) {
            ops_.add();
            if (in_state_[v] || !touches(s, v)) continue;
            ++count;
            if (out) {
                State t = s;
                insert_sorted(t.nodes, t.size, v);
                out->push_back(t);
            }
        }
    }
    for (int i = 0; i < s.size; ++i) {
        const State r = without(i);
        const bool rest_connected = connected(r);
        for (int v = 0; v < n; ++v) {
            ops_.add();
            if (in_state_[v] || !touches(r, v)) continue;
            State t = r;
            insert_sorted(t.nodes, t.size, v);
            if (!rest_connected && !connected(t)) continue;
            ++count;
            if (out) out->push_back(t);
        }
    }

    for (int i = 0; i < s.size; ++i) in_state_[s.nodes[i]] = 0;
    return count;
}

void GraphletWalk::classify_current() {
    const int k = state_.size;
    ops_.add(static_cast<std::uint64_t>(k * (k - 1) / 2));
    pattern_ = static_cast<Pattern>(classify_code(induced_code(g_, state()), k));
}

void GraphletWalk::step() {
    ++steps_;
    scratch_.clear();
    const std::size_t degree = neighbors(state_, &scratch_);
    if (degree == 0) return;
    const State proposal = scratch_[rng_.below(degree)];
    const std::size_t proposal_degree = neighbors(proposal, nullptr);
    const double u = rng_.uniform01();
    ops_.add();
    if (u * static_cast<double>(proposal_degree) < static_cast<double>(degree)) {
        state_ = proposal;
        ++accepted_;
        classify_current();
    }
}

Gfd estimate_guise_gfd(const Graph& g, std::uint64_t steps, std::uint64_t burn_in, std::uint64_t seed,
                       OpCounter& counter, WalkConfig cfg) {
    if (steps == 0) throw InvalidConfig("walk needs at least one recorded step");
    GraphletWalk walk(g, seed, counter, cfg);
    for (std::uint64_t i = 0; i < burn_in; ++i) walk.step();
    std::array<std::uint64_t, kPatternCount> visits{};
    for (std::uint64_t i = 0; i < steps; ++i) {
        walk.step();
        ++visits[static_cast<std::size_t>(walk.pattern())];
    }
    Gfd gfd;
    for (std::size_t i = 0; i < kPatternCount; ++i)
        if (visits[i] > 0) gfd[static_cast<Pattern>(i)] = static_cast<double>(visits[i]) / static_cast<double>(steps);
    return gfd;
}

std::map<Pattern, double> counts_from_gfd(const Gfd& gfd, Pattern anchor, double anchor_count) {
    const auto it = gfd.find(anchor);
    if (it == gfd.end() || !(it->second > 0.0))
        throw ZeroAnchorFrequency(std::string(pattern_name(anchor)) + " was never visited");
    std::map<Pattern, double> out;
    for (const auto& [p, f] : gfd) out[p] = p == anchor ? anchor_count : f / it->second * anchor_count;
    return out;
}

Estimator make_edge_estimator(Pattern p, EdgeSampling mode) {
    return [p, mode](const Graph& g, std::uint64_t budget, std::uint64_t seed) {
        OpCounter counter;
        return estimate_edge_sampling(g, p, budget, seed, counter, mode);
    };
}

Estimator make_mcmc_estimator(Pattern p, WalkConfig cfg) {
    return [p, cfg](const Graph& g, std::uint64_t budget, std::uint64_t seed) {
        OpCounter counter;
        EstimateResult r;
        r.budget = budget;
        r.seed = seed;
        const std::uint64_t triangles = triangle_count_fast(g, &counter);
        std::uint64_t wedges = 0;
        for (int v = 0; v < g.node_count(); ++v) {
            const std::uint64_t d = g.degree(v);
            wedges += d * (d - (d > 0 ? 1 : 0)) / 2;
        }
        const std::uint64_t open = wedges - 3 * triangles;
        counter.add();
        const Pattern anchor = open >= triangles ? Pattern::OpenTriangle : Pattern::Triangle;
        const double anchor_count = static_cast<double>(anchor == Pattern::OpenTriangle ? open : triangles);
        if (p == anchor) {
            r.estimate = anchor_count;
        } else if (anchor_count > 0.0) {
            try {
                const Gfd gfd = estimate_guise_gfd(g, budget, budget / 10, seed, counter, cfg);
                const auto counts = counts_from_gfd(gfd, anchor, anchor_count);
                const auto it = counts.find(p);
                r.estimate = it == counts.end() ? 0.0 : it->second;
            } catch (const ZeroAnchorFrequency&) {
                r.estimate = 0.0;
            }
        }
        r.ops = counter.comparisons();
        return r;
    };
}

TuneResult tune_budget_to_error(std::span<const Graph> graphs, std::span<const double> truths, double target,
                                const Estimator& estimator, std::uint64_t cap, std::uint64_t seed, double tolerance) {
    if (!(target > 0.0)) throw InvalidConfig("target relative error must be positive");
    if (cap < 1) throw InvalidConfig("budget cap must be >= 1");
    if (graphs.size() != truths.size()) throw LengthMismatch("graphs vs truths");
    if (graphs.empty()) throw EmptySplit("no graphs to tune on");

    struct Eval {
        double error;
        double mean_ops;
        std::vector<double> estimates;
    };
    auto evaluate = [&](std::uint64_t budget) {
        Eval ev{0.0, 0.0, {}};
        double ops = 0.0;
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            const EstimateResult r = estimator(graphs[i], budget, derive_seed(seed, "tune", i));
            ev.estimates.push_back(r.estimate);
            ops += static_cast<double>(r.ops);
        }
        ev.error = relative_error(ev.estimates, truths).e;
        ev.mean_ops = ops / static_cast<double>(graphs.size());
        return ev;
    };
    const double accept = (1.0 + tolerance) * target;
    auto finish = [](std::uint64_t budget, Eval ev, bool capped) {
        return TuneResult{budget, ev.error, ev.mean_ops, capped, std::move(ev.estimates)};
    };

    std::uint64_t budget = 1;
    std::uint64_t last_miss = 0;
    while (true) {
        Eval ev = evaluate(budget);
        if (ev.error <= accept) {
            // Bisect down toward the last failing budget for the smallest hit.
            std::uint64_t lo = last_miss;
            std::uint64_t hi = budget;
            while (hi - lo > 1) {
                const std::uint64_t mid = lo + (hi - lo) / 2;
                Eval mid_ev = evaluate(mid);
                if (mid_ev.error <= accept) {
                    hi = mid;
                    ev = std::move(mid_ev);
                } else {
                    lo = mid;
                }
            }
            return finish(hi, std::move(ev), false);
        }
        if (budget >= cap) return finish(budget, std::move(ev), true);
        last_miss = budget;
        budget = std::min(cap, budget * 2);
    }
}

TuneResult tune_budget_to_error(std::span<const Graph> graphs, Pattern p, double target, const Estimator& estimator,
                                std::uint64_t cap, std::uint64_t seed, double tolerance) {
    std::vector<double> truths;
    truths.reserve(graphs.size());
    for (const Graph& g : graphs) truths.push_back(static_cast<double>(count_exact(g, p)));
    return tune_budget_to_error(graphs, truths, target, estimator, cap, seed, tolerance);
}

}  // namespace gcnn
