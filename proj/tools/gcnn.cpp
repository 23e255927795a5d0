// gcnn: command-line front end for dataset generation, exact counting,
// sampling estimates, training, evaluation and the cost comparison.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gcnn/cnn.hpp"
#include "gcnn/dataset.hpp"
#include "gcnn/error.hpp"
#include "gcnn/exact.hpp"
#include "gcnn/harness.hpp"
#include "gcnn/model_io.hpp"
#include "gcnn/parallel.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/sampling.hpp"
#include "gcnn/simd/kernels.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

// Refusing to overwrite is reported as a data error.
struct OutputExists : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    unsigned jobs = 1;
    bool force = false;
    std::optional<std::uint64_t> seed;
};

void check_output(const std::string& path, bool force) {
    if (path.empty() || path == "-") return;
    if (fs::exists(path) && !force) throw OutputExists(path + " exists; pass --force to overwrite");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void log(const std::string& msg) { std::cerr << msg << '\n'; }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// gen ----------------------------------------------------------------------

struct GenArgs {
    std::string model;
    int n = 0;
    double p = -1.0;
    double r = -1.0;
    int dim = 3;
    int count = 1;
    std::string out;
};

void run_gen(const GenArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    if (a.count < 0) throw gcnn::InvalidConfig("--count must be >= 0");
    const std::uint64_t seed = g.seed.value_or(0);
    gcnn::GraphDataset ds;
    ds.pad_dim = a.n;
    for (int i = 0; i < a.count; ++i) {
        const std::uint64_t s = gcnn::derive_seed(seed, "graph", static_cast<std::uint64_t>(i));
        gcnn::Graph graph;
        if (a.model == "er") {
            if (a.p < 0.0) throw CLI::RequiredError("--p");
            graph = gcnn::gen_er({a.n, a.p, s});
        } else {
            if (a.r < 0.0) throw CLI::RequiredError("--r");
            graph = gcnn::gen_rgg({a.n, a.r, a.dim, s});
        }
        ds.samples.push_back({"g" + std::to_string(i), std::move(graph), 0.0, gcnn::Split::Train});
    }
    std::ostringstream buf;
    gcnn::write_dataset(buf, ds);
    write_text(a.out, buf.str());
    log("wrote " + std::to_string(a.count) + " graphs");
}

// count --------------------------------------------------------------------

struct CountArgs {
    std::string in;
    int k = 0;
    std::string pattern;
    std::string out;
};

void run_count(const CountArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    std::optional<gcnn::Pattern> only;
    if (!a.pattern.empty()) {
        only = gcnn::parse_pattern(a.pattern);
        if (gcnn::pattern_size(*only) != a.k)
            throw gcnn::InvalidConfig("pattern " + a.pattern + " does not have " + std::to_string(a.k) + " nodes");
    }
    if (a.k < 3 || a.k > 5) throw gcnn::UnknownPattern("--k must be 3, 4 or 5");
    const gcnn::GraphDataset ds = gcnn::load_dataset(a.in);
    std::vector<gcnn::CountVector> counts(ds.samples.size());
    gcnn::parallel_for(ds.samples.size(), g.jobs, [&](std::size_t i) { counts[i] = gcnn::count_all(ds.samples[i].graph, a.k); });
    std::string text;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        ordered_json c;
        for (gcnn::Pattern p : gcnn::patterns_of_size(a.k))
            if (!only || *only == p) c[std::string(gcnn::pattern_name(p))] = counts[i][p];
        text += ordered_json{{"id", ds.samples[i].id}, {"k", a.k}, {"counts", c}}.dump() + "\n";
    }
    write_text(a.out, text);
}

// estimate -----------------------------------------------------------------

struct EstimateArgs {
    std::string in;
    std::string pattern;
    std::string method;
    std::uint64_t budget = 0;
    std::string out;
};

void run_estimate(const EstimateArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    const gcnn::Pattern p = gcnn::parse_pattern(a.pattern);
    if (a.budget == 0) throw gcnn::InvalidConfig("--budget must be positive");
    const gcnn::Estimator est = a.method == "edge" ? gcnn::make_edge_estimator(p) : gcnn::make_mcmc_estimator(p);
    const gcnn::GraphDataset ds = gcnn::load_dataset(a.in);
    const std::uint64_t seed = g.seed.value_or(0);
    std::vector<gcnn::EstimateResult> results(ds.samples.size());
    gcnn::parallel_for(ds.samples.size(), g.jobs, [&](std::size_t i) {
        results[i] = est(ds.samples[i].graph, a.budget, gcnn::derive_seed(seed, "estimate", i));
    });
    std::string text;
    for (std::size_t i = 0; i < results.size(); ++i)
        text += ordered_json{{"graph_id", ds.samples[i].id},
                             {"pattern", gcnn::pattern_name(p)},
                             {"method", a.method},
                             {"budget", results[i].budget},
                             {"estimate", results[i].estimate},
                             {"comparisons", results[i].ops},
                             {"seed", results[i].seed}}
                    .dump() +
                "\n";
    write_text(a.out, text);
}

// train --------------------------------------------------------------------

struct TrainArgs {
    std::string config;
    std::string out;
};

void run_train(const TrainArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    gcnn::ExperimentConfig cfg = gcnn::load_config(a.config);
    if (g.seed) cfg.seed = *g.seed;

    log("building dataset");
    const gcnn::GraphDataset ds = gcnn::build_labeled_dataset(cfg, g.jobs);
    log("dataset: " + std::to_string(ds.split_size(gcnn::Split::Train)) + " train, " +
        std::to_string(ds.split_size(gcnn::Split::Validation)) + " validation, " +
        std::to_string(ds.split_size(gcnn::Split::Test)) + " test, pad_dim " + std::to_string(ds.pad_dim));
    gcnn::ModelConfig mc = cfg.model;
    mc.input_dim = ds.pad_dim;
    cfg.model.input_dim = ds.pad_dim;

    const auto result = gcnn::train(ds, mc, cfg.train, cfg.seed, g.jobs, [](const gcnn::EpochRecord& r) {
        char line[128];
        std::snprintf(line, sizeof line, "epoch %3d  train_loss %.6g  val_e %.4f", r.epoch, r.train_loss, r.val_e);
        log(line);
    });

    ordered_json metrics;
    metrics["best_epoch"] = result.history.best_epoch;
    metrics["stopped_early"] = result.history.stopped_early;
    metrics["early_stopping"] = "validation relative error";
    for (gcnn::Split s : {gcnn::Split::Train, gcnn::Split::Validation, gcnn::Split::Test}) {
        if (ds.split_size(s) == 0) continue;
        const auto m = gcnn::evaluate(result.model, ds, s, g.jobs);
        metrics[std::string(gcnn::split_name(s))] = ordered_json::parse(gcnn::metrics_to_json(m));
        if (s == gcnn::Split::Test) log("test e = " + std::to_string(m.e));
    }

    fs::create_directories(a.out);
    const fs::path dir(a.out);
    write_text((dir / "config.json").string(), gcnn::config_to_json(cfg));
    gcnn::save_dataset(ds, dir / "dataset.jsonl");
    gcnn::save_model(result.model, dir / "model.bin");
    write_text((dir / "history.csv").string(), gcnn::history_to_csv(result.history));
    write_text((dir / "metrics.json").string(), dump(metrics));
}

// eval ---------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::string data;
    std::string split = "test";
    std::string out;
};

void run_eval(const EvalArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    const auto model = gcnn::load_model<float>(a.model);
    const auto ds = gcnn::load_dataset(a.data);
    const auto m = gcnn::evaluate(model, ds, gcnn::parse_split(a.split), g.jobs);
    write_text(a.out, gcnn::metrics_to_json(m));
}

// compare ------------------------------------------------------------------

struct CompareArgs {
    std::string config;
    std::string model;
    std::string data;
    std::string split = "test";
    std::string methods;
    std::uint64_t cap = 0;
    std::string out;
};

void run_compare(const CompareArgs& a, const Globals& g) {
    check_output(a.out, g.force);
    gcnn::ExperimentConfig cfg = gcnn::load_config(a.config);
    if (g.seed) cfg.seed = *g.seed;
    if (!a.methods.empty()) {
        cfg.compare.methods.clear();
        std::stringstream ss(a.methods);
        for (std::string m; std::getline(ss, m, ',');) cfg.compare.methods.push_back(m);
    }
    if (a.cap > 0) cfg.compare.cap = a.cap;
    cfg.validate();
    const auto model = gcnn::load_model<float>(a.model);
    const auto ds = gcnn::load_dataset(a.data);
    const auto report = gcnn::compare(model, ds, gcnn::parse_split(a.split), cfg.pattern, cfg.compare,
                                      gcnn::sub_seed(cfg, "compare"), g.jobs);
    for (const auto& row : report.rows)
        log(row.method + ": e=" + std::to_string(row.error) + " ops/graph=" + std::to_string(row.ops_per_graph) +
            (row.cap_reached ? " (cap reached)" : ""));
    fs::create_directories(a.out);
    const fs::path dir(a.out);
    write_text((dir / "comparison.csv").string(), gcnn::comparison_to_csv(report));
    write_text((dir / "comparison.json").string(), gcnn::comparison_to_json(report));
}

// flops --------------------------------------------------------------------

void run_flops(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gcnn::InvalidConfig("cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw gcnn::InvalidConfig(std::string("not valid JSON: ") + e.what());
    }
    // Accepts a bare model block, an experiment config or a model file.
    gcnn::ModelConfig mc;
    const nlohmann::json* m = &j;
    if (j.contains("config") && j.value("format", "") == "gcnn-model") m = &j.at("config");
    else if (j.contains("model")) m = &j.at("model");
    try {
        for (const auto& [key, value] : m->items()) {
            if (key == "input_dim") mc.input_dim = value.get<int>();
            else if (key == "filter1") mc.filter1 = value.get<int>();
            else if (key == "filter2") mc.filter2 = value.get<int>();
            else if (key == "channels1") mc.channels1 = value.get<int>();
            else if (key == "channels2") mc.channels2 = value.get<int>();
            else if (key == "output_relu") mc.output_relu = value.get<bool>();
            else if (m == &j) throw gcnn::InvalidConfig("unknown model key '" + key + "'");
        }
        if (m != &j && j.contains("pad_dim") && j.at("pad_dim").get<int>() > 0) mc.input_dim = j.at("pad_dim").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw gcnn::InvalidConfig(e.what());
    }
    const auto r = gcnn::flops(mc);
    ordered_json out{{"conv1", r.conv1}, {"conv2", r.conv2}, {"dense", r.dense}, {"total", r.total},
                     {"convention", r.convention}, {"parameters", gcnn::parameter_count(mc)}};
    std::cout << dump(out);
}

std::string version_text() {
    ordered_json j{{"version", GCNN_VERSION},
                   {"model_format", gcnn::kModelFormatVersion},
                   {"dataset_format", gcnn::kDatasetFormatVersion},
                   {"flops_convention", gcnn::kFlopsConvention},
                   {"kernels", std::string(gcnn::simd::isa_name(gcnn::simd::active_isa()))}};
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphlet counting with a convolutional network, exact counters and sampling baselines", "gcnn"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_text());

    Globals g;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--force", g.force, "Overwrite existing outputs");
        sub->add_option("--seed", seed, "Random seed");
    };

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate random graphs as a JSONL dataset");
    gen_cmd->add_option("--model", gen.model, "er or rgg")->required()->check(CLI::IsMember({"er", "rgg"}));
    gen_cmd->add_option("--n", gen.n, "Node count")->required()->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--p", gen.p, "ER edge probability");
    gen_cmd->add_option("--r", gen.r, "RGG radius");
    gen_cmd->add_option("--dim", gen.dim, "RGG space dimension (2 or 3)");
    gen_cmd->add_option("--count", gen.count, "Number of graphs");
    gen_cmd->add_option("--out", gen.out, "Output file, - for stdout")->required();
    add_common(gen_cmd);

    CountArgs count;
    auto* count_cmd = app.add_subcommand("count", "Exact graphlet counts");
    count_cmd->add_option("--in", count.in, "Dataset JSONL")->required();
    count_cmd->add_option("--k", count.k, "Graphlet size 3..5")->required();
    count_cmd->add_option("--pattern", count.pattern, "Report only this pattern");
    count_cmd->add_option("--out", count.out, "Output file (default stdout)");
    add_common(count_cmd);

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "Sampling estimate of one pattern count");
    est_cmd->add_option("--in", est.in, "Dataset JSONL")->required();
    est_cmd->add_option("--pattern", est.pattern, "Pattern name")->required();
    est_cmd->add_option("--method", est.method, "edge or mcmc")->required()->check(CLI::IsMember({"edge", "mcmc"}));
    est_cmd->add_option("--budget", est.budget, "Sampled edges or walk steps")->required();
    est_cmd->add_option("--out", est.out, "Output file (default stdout)");
    add_common(est_cmd);

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Build the labeled dataset and train a model");
    train_cmd->add_option("--config", tr.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", tr.out, "Output directory")->required();
    add_common(train_cmd);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Relative error of a model on one split");
    eval_cmd->add_option("--model", ev.model, "model.bin")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--data", ev.data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--split", ev.split, "train, validation or test");
    eval_cmd->add_option("--out", ev.out, "Output file (default stdout)");
    add_common(eval_cmd);

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "Operation counts at matched relative error");
    cmp_cmd->add_option("--config", cmp.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--model", cmp.model, "model.bin")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--data", cmp.data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--split", cmp.split, "Split to compare on");
    cmp_cmd->add_option("--methods", cmp.methods, "Comma-separated: edge, edge-full, mcmc");
    cmp_cmd->add_option("--cap", cmp.cap, "Budget cap for tuning");
    cmp_cmd->add_option("--out", cmp.out, "Output directory")->required();
    add_common(cmp_cmd);

    std::string flops_config;
    auto* flops_cmd = app.add_subcommand("flops", "FLOPs of one forward pass");
    flops_cmd->add_option("--config", flops_config, "Model config, experiment config or model file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(flops_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    for (auto* sub : app.get_subcommands())
        if (sub->count("--seed") > 0) g.seed = seed;

    try {
        if (*gen_cmd) run_gen(gen, g);
        else if (*count_cmd) run_count(count, g);
        else if (*est_cmd) run_estimate(est, g);
        else if (*train_cmd) run_train(tr, g);
        else if (*eval_cmd) run_eval(ev, g);
        else if (*cmp_cmd) run_compare(cmp, g);
        else if (*flops_cmd) run_flops(flops_config);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const OutputExists& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const gcnn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.category() == gcnn::ErrorCategory::Data ? kExitData : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
