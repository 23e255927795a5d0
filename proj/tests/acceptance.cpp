// Acceptance suite: one PASS/FAIL/SKIPPED line per criterion. The exit status
// is nonzero on a crash, or with --strict when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gcnn/cnn.hpp"
#include "gcnn/exact.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/harness.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/sampling.hpp"
#include "oracles.hpp"

using namespace gcnn;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { Pass, Fail, Skipped };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Pinned limits.
constexpr double kOracleSeconds = 60.0;
constexpr double kWalkL1 = 0.02;
constexpr double kGfdL1 = 0.05;
constexpr double kGradRel = 1e-4;
constexpr double kErTarget = 0.10;
constexpr double kRggTarget = 0.15;
constexpr double kMutagTarget = 0.20;
constexpr double kMatchTolerance = 0.2;
constexpr double kTrainSeconds = 45.0 * 60.0;

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    const double ps[] = {0.2, 0.5, 0.8};
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = 3 + static_cast<int>(rng() % 10);
        const Graph g = oracle::random_graph(n, ps[i % 3], rng());
        for (int k = 3; k <= 5; ++k) {
            const auto fast = count_all(g, k);
            const auto slow = oracle::naive_counts(g, k);
            for (Pattern p : patterns_of_size(k))
                if (fast[p] != slow[static_cast<std::size_t>(p)]) ++mismatches;
        }
    }
    const double secs = seconds_since(t0);
    return verdict(mismatches == 0 && secs < kOracleSeconds,
                   std::to_string(mismatches) + " mismatches over 500 graphs, " + fmt("%.1f s", secs));
}

Outcome invariance() {
    std::mt19937_64 rng(77);
    int mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = 4 + static_cast<int>(rng() % 12);
        const Graph g = oracle::random_graph(n, 0.2 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0, rng());
        const int pad = n + static_cast<int>(rng() % 10);
        const PaddedMatrix padded = pad_to(g, pad);
        const auto swapped = swap_augment(padded, 1 + static_cast<int>(rng() % 20), rng());
        std::vector<Graph> variants{padded.to_graph()};
        for (const auto& m : swapped) variants.push_back(m.to_graph());
        for (int k = 3; k <= 5; ++k) {
            const auto ref = count_all(g, k);
            for (const Graph& v : variants)
                if (count_all(v, k) != ref) ++mismatches;
        }
    }
    return verdict(mismatches == 0, std::to_string(mismatches) + " mismatching (graph, transform, k) cases of 200 triples");
}

Outcome edge_unbiased() {
    const auto t0 = Clock::now();
    const Graph g = gen_er({30, 0.3, 12345});
    const std::uint64_t s = (g.edge_count() + 1) / 2;
    bool ok = true;
    std::string detail;
    for (Pattern p : {Pattern::FourClique, Pattern::TailedTriangle}) {
        const double exact = static_cast<double>(count_exact(g, p));
        const int runs = 1000;
        double sum = 0, sum2 = 0;
        for (int i = 0; i < runs; ++i) {
            OpCounter c;
            const double e = estimate_edge_sampling(g, p, s, derive_seed(99, "acceptance", i), c).estimate;
            sum += e;
            sum2 += e * e;
        }
        const double mean = sum / runs;
        const double se = std::sqrt((sum2 / runs - mean * mean) / (runs - 1));
        const double z = se > 0 ? std::abs(mean - exact) / se : (mean == exact ? 0.0 : INFINITY);
        ok = ok && z <= 3.0;
        detail += std::string(pattern_name(p)) + " exact " + fmt("%.0f", exact) + " mean " + fmt("%.2f", mean) +
                  " (" + fmt("%.2f", z) + " SE); ";
    }
    const double secs = seconds_since(t0);
    return verdict(ok && secs < kOracleSeconds, detail + fmt("%.1f s", secs));
}

Outcome mcmc_stationarity() {
    // Triangle with a pendant path and a chord: every connected 3..5-set is a state.
    const Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 4}});
    std::uint64_t states = 0;
    for (int k = 3; k <= 5; ++k) states += oracle::naive_connected_subsets(g, k);
    const std::uint64_t three = oracle::naive_connected_subsets(g, 3);
    OpCounter c;
    GraphletWalk w(g, 2024, c);
    for (int i = 0; i < 1000; ++i) w.step();
    std::map<std::vector<int>, std::uint64_t> visits;
    const std::uint64_t steps = 1000000;
    for (std::uint64_t i = 0; i < steps; ++i) {
        w.step();
        ++visits[std::vector<int>(w.state().begin(), w.state().end())];
    }
    double l1 = 0;
    for (const auto& [s, n] : visits) l1 += std::abs(static_cast<double>(n) / steps - 1.0 / static_cast<double>(states));
    l1 += static_cast<double>(states - visits.size()) / static_cast<double>(states);

    const Graph star = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
    OpCounter c2;
    const Gfd gfd = estimate_guise_gfd(star, steps, 1000, 7, c2);
    std::map<Pattern, double> want{{Pattern::OpenTriangle, 0.75}, {Pattern::ThreeStar, 0.25}};
    double gl1 = 0;
    std::set<Pattern> keys;
    for (const auto& [p, v] : gfd) keys.insert(p);
    for (const auto& [p, v] : want) keys.insert(p);
    for (Pattern p : keys) gl1 += std::abs((gfd.count(p) ? gfd.at(p) : 0.0) - (want.count(p) ? want.at(p) : 0.0));
    return verdict(three <= 50 && l1 <= kWalkL1 && gl1 <= kGfdL1,
                   std::to_string(states) + " states (" + std::to_string(three) + " of 3 nodes), L1 " + fmt("%.4f", l1) +
                       "; K1,3 GFD L1 " + fmt("%.4f", gl1));
}

Outcome gradient_check() {
    ModelConfig cfg;
    auto model = make_model<double>(cfg, 31);
    // Random biases keep pre-activations off the ReLU kink at exactly zero,
    // where central differences are undefined.
    std::mt19937_64 brng(3);
    std::uniform_real_distribution<double> bias(-0.1, 0.1);
    for (double& b : model.conv1.bias) b = bias(brng);
    for (double& b : model.conv2.bias) b = bias(brng);
    model.dense.bias = 1.0;
    std::vector<Tensor3<double>> inputs;
    for (std::uint64_t s : {1u, 2u}) {
        const PaddedMatrix mx = pad_to(oracle::random_graph(45, 0.5, s), cfg.input_dim);
        Tensor3<double> x(cfg.input_dim, cfg.input_dim, 1);
        for (int i = 0; i < cfg.input_dim; ++i)
            for (int j = 0; j < cfg.input_dim; ++j) x.at(i, j, 0) = mx.at(i, j);
        inputs.push_back(std::move(x));
    }
    const std::vector<const Tensor3<double>*> xs{&inputs[0], &inputs[1]};
    const std::vector<double> t{0.7, 1.3};
    std::vector<double> grads;
    const auto g = backward<double>(model, xs, t).grads;
    for_each_block(g, [&](auto s) { grads.insert(grads.end(), s.begin(), s.end()); });
    std::vector<double*> params;
    std::vector<int> layer_of;
    int block = 0;
    for_each_block(model, [&](auto s) {
        for (auto& v : s) {
            params.push_back(&v);
            layer_of.push_back(block / 2);
        }
        ++block;
    });
    std::mt19937_64 rng(5);
    double worst = 0;
    const double h = 1e-5;
    for (int trial = 0; trial < 200; ++trial) {
        const int layer = trial % 3;
        std::size_t i;
        do i = rng() % params.size();
        while (layer_of[i] != layer);
        const double saved = *params[i];
        *params[i] = saved + h;
        const double up = batch_loss<double>(model, xs, t);
        *params[i] = saved - h;
        const double down = batch_loss<double>(model, xs, t);
        *params[i] = saved;
        const double fd = (up - down) / (2 * h);
        const double denom = std::max({std::abs(fd), std::abs(grads[i]), 1e-8});
        worst = std::max(worst, std::abs(fd - grads[i]) / denom);
    }
    return verdict(worst < kGradRel, "worst relative error " + fmt("%.2e", worst) + " over 200 parameters");
}

Outcome flops_consistency() {
    std::mt19937_64 rng(11);
    int mismatches = 0;
    for (int t = 0; t < 10; ++t) {
        ModelConfig c;
        c.filter1 = 1 + static_cast<int>(rng() % 6);
        c.filter2 = 1 + static_cast<int>(rng() % 6);
        c.input_dim = c.filter1 + c.filter2 + static_cast<int>(rng() % 20);
        c.channels1 = 1 + static_cast<int>(rng() % 8);
        c.channels2 = 1 + static_cast<int>(rng() % 8);
        const auto m = make_model<double>(c, rng());
        Tensor3<double> x(c.input_dim, c.input_dim, 1);
        for (double& v : x.values()) v = static_cast<double>(rng() % 2);
        oracle::FlopTally tally;
        oracle::instrumented_forward(m, x, tally);
        if (tally.total() != flops(m).total) ++mismatches;
    }
    return verdict(mismatches == 0, std::to_string(mismatches) + " of 10 shapes differ");
}

ExperimentConfig er_experiment() {
    ExperimentConfig c;
    c.source.kind = SourceKind::Er;
    c.source.n = 50;
    c.source.p = 0.5;
    c.pattern = Pattern::FourClique;
    c.seed = 1;
    c.train.adam.lr = 3e-4;
    c.train.adam.dense_lr = 1e-5;
    c.train.epoch_swaps = 50;
    c.train.max_epochs = 40;
    c.train.patience = 15;
    c.compare.methods = {"edge", "mcmc"};
    c.compare.cap = 1u << 17;
    c.compare.tolerance = kMatchTolerance;
    c.compare.tune_graphs = 30;
    return c;
}

ExperimentConfig rgg_experiment() {
    ExperimentConfig c = er_experiment();
    c.source.kind = SourceKind::Rgg;
    c.source.r = 0.45;
    c.source.dim = 3;
    c.train.adam.lr = 1e-3;
    c.train.adam.dense_lr = 1e-4;
    c.train.lr_decay = 0.985;
    c.train.max_epochs = 200;
    c.train.patience = 40;
    return c;
}

struct Trained {
    GraphDataset ds;
    TrainResult result;
    MetricsReport test;
    double seconds = 0;
};

Trained run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = Clock::now();
    Trained t;
    t.ds = build_labeled_dataset(cfg, jobs());
    t.result = train(t.ds, cfg.model, cfg.train, cfg.seed, jobs());
    t.test = evaluate(t.result.model, t.ds, Split::Test, jobs());
    t.seconds = seconds_since(t0);
    return t;
}

Outcome reproduction(const Trained& t, double target) {
    return verdict(t.test.e <= target && t.seconds <= kTrainSeconds,
                   "test e " + fmt("%.4f", t.test.e) + " (limit " + fmt("%.2f", target) + "), best epoch " +
                       std::to_string(t.result.history.best_epoch) + ", " + fmt("%.0f s", t.seconds));
}

Outcome speed_shape(const ExperimentConfig& cfg, const Trained& t) {
    const auto rep = compare(t.result.model, t.ds, Split::Test, cfg.pattern, cfg.compare, sub_seed(cfg, "compare"), jobs());
    const auto& cnn = rep.rows.front();
    bool ok = true;
    std::string detail = "cnn e " + fmt("%.4f", cnn.error) + " flops " + fmt("%.0f", cnn.ops_per_graph);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        // A sampler that misses the matched error even at the cap needs more
        // than cap-budget comparisons, which still bounds it from below.
        const bool matched = r.cap_reached || r.error <= (1.0 + kMatchTolerance) * rep.target_error;
        const bool cheaper = cnn.ops_per_graph < r.ops_per_graph;
        ok = ok && matched && cheaper;
        detail += "; " + r.method + " e " + fmt("%.4f", r.error) + " ops " + fmt("%.0f", r.ops_per_graph) +
                  " budget " + std::to_string(r.budget) + (r.cap_reached ? " (cap)" : "");
    }
    return verdict(ok, detail + "; direction only, absolute magnitudes not comparable");
}

Outcome mutag() {
    const char* dir = std::getenv("GCNN_MUTAG_DIR");
    if (!dir || !std::filesystem::is_directory(dir)) return {Status::Skipped, "GCNN_MUTAG_DIR not set"};
    ExperimentConfig c;
    c.source.kind = SourceKind::Tu;
    c.source.path = dir;
    c.pattern = Pattern::FourPath;
    c.augment = 5;
    c.seed = 1;
    c.train.max_epochs = 100;
    c.train.patience = 20;
    const auto t = run_experiment(c);
    return verdict(t.test.e <= kMutagTarget, "test e " + fmt("%.4f", t.test.e) + " on " +
                                                  std::to_string(t.test.sample_count) + " test graphs");
}

}  // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
    int failures = 0;
    // GCNN_ACCEPT_ONLY=1,2,5 runs a subset; the rest report SKIPPED.
    std::set<int> only;
    if (const char* sel = std::getenv("GCNN_ACCEPT_ONLY")) {
        std::string item;
        for (const char* c = sel;; ++c) {
            if (*c == ',' || *c == 0) {
                if (!item.empty()) only.insert(std::atoi(item.c_str()));
                item.clear();
                if (*c == 0) break;
            } else {
                item += *c;
            }
        }
    }
    auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            if (!only.empty() && !only.count(id)) o = {Status::Skipped, "not selected by GCNN_ACCEPT_ONLY"};
            else o = fn();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("exception: ") + e.what()};
        }
        const char* s = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIPPED";
        if (o.status == Status::Fail) ++failures;
        std::printf("criterion %2d %-22s %-7s %s\n", id, name, s, o.detail.c_str());
        std::fflush(stdout);
    };
    report(1, "oracle-equivalence", oracle_equivalence);
    report(2, "invariance", invariance);
    report(3, "edge-unbiased", edge_unbiased);
    report(4, "mcmc-stationarity", mcmc_stationarity);
    report(5, "gradient-check", gradient_check);
    report(6, "flops-consistency", flops_consistency);

    const auto er_cfg = er_experiment();
    std::optional<Trained> er;
    report(7, "er-reproduction", [&] {
        er = run_experiment(er_cfg);
        return reproduction(*er, kErTarget);
    });
    report(8, "rgg-reproduction", [&] { return reproduction(run_experiment(rgg_experiment()), kRggTarget); });
    report(9, "speed-shape", [&]() -> Outcome {
        if (!er) return {Status::Fail, "ER model unavailable"};
        return speed_shape(er_cfg, *er);
    });
    report(10, "mutag-fourpath", mutag);
    std::printf("acceptance complete: %d criteria failed\n", failures);
    return strict && failures > 0 ? 1 : 0;
}
