#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gcnn/cnn.hpp"
#include "gcnn/dataset.hpp"
#include "gcnn/metrics.hpp"
#include "gcnn/pattern.hpp"

namespace gcnn {

enum class SourceKind { Er, Rgg, Tu, Jsonl };

struct SourceConfig {
    SourceKind kind = SourceKind::Er;
    int n = 50;
    double p = 0.5;
    double r = 0.45;
    int dim = 3;
    std::filesystem::path path;  // TU directory or JSONL file
};

struct TrainConfig {
    AdamConfig adam;
    int batch_size = 32;
    int max_epochs = 50;
    int patience = 10;
    bool normalize_targets = true;
    // Start the dense layer at W3 = 0, b3 = mean target instead of the
    // fan-in draw, so the output ReLU is alive on every sample at step 0.
    bool zero_init_output = true;
    // Multiplies the learning rate after every epoch.
    double lr_decay = 1.0;
    // Random row/column transpositions applied to every training matrix at
    // the start of each epoch. They accumulate across epochs.
    int epoch_swaps = 0;
};

struct CompareConfig {
    std::vector<std::string> methods{"edge", "mcmc"};
    std::uint64_t cap = 1u << 20;
    double tolerance = 0.2;
    int tune_graphs = 0;  // 0 = whole split
};

struct ExperimentConfig {
    SourceConfig source;
    Pattern pattern = Pattern::FourClique;
    int train_size = 3000;
    int val_size = 300;
    int test_size = 300;
    int augment = 0;
    int pad_dim = 0;  // 0 = largest graph
    std::uint64_t seed = 1;
    ModelConfig model;
    TrainConfig train;
    CompareConfig compare;

    /// Throws InvalidConfig.
    void validate() const;
};

/// Missing keys keep their defaults; unknown keys throw InvalidConfig.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Resolved configuration including the derived sub-seeds.
std::string config_to_json(const ExperimentConfig& cfg);

/// Named sub-seed of the experiment seed ("data", "split", "augment",
/// "init", "shuffle", "compare").
std::uint64_t sub_seed(const ExperimentConfig& cfg, const char* stream);

/// Generates or loads graphs, labels them with count_exact, assigns splits
/// and appends `augment` swap-augmented copies of every training graph.
/// Generated sources use the configured split sizes; TU and JSONL pools are
/// split 80/10/10 after a seeded shuffle.
GraphDataset build_labeled_dataset(const ExperimentConfig& cfg, unsigned jobs = 1);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;  // mean MSE over the epoch's batches, normalized units
    double val_e = 0.0;       // NaN when the validation split is empty
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    bool stopped_early = false;
};

struct TrainResult {
    CnnModel<float> model;
    TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Throws EmptySplit, DivergedLoss.
TrainResult train(const GraphDataset& ds, const ModelConfig& model_cfg, const TrainConfig& cfg, std::uint64_t seed,
                  unsigned jobs = 1, const EpochCallback& on_epoch = {});

std::vector<double> predict(const CnnModel<float>& model, const GraphDataset& ds, Split split, unsigned jobs = 1);

/// Throws EmptySplit, ShapeMismatch.
MetricsReport evaluate(const CnnModel<float>& model, const GraphDataset& ds, Split split, unsigned jobs = 1);

struct ComparisonRow {
    std::string method;
    double error = 0.0;
    double ops_per_graph = 0.0;
    double ops_total = 0.0;
    std::uint64_t budget = 0;
    bool cap_reached = false;
};

struct ComparisonReport {
    Pattern pattern = Pattern::FourClique;
    std::string dataset;
    std::size_t sample_count = 0;
    double target_error = 0.0;
    std::vector<ComparisonRow> rows;  // first row is the CNN
};

/// Methods: "edge" (with-replacement edge sampling), "edge-full" (one full
/// pass over the edges, untuned), "mcmc".
ComparisonReport compare(const CnnModel<float>& model, const GraphDataset& ds, Split split, Pattern pattern,
                         const CompareConfig& cfg, std::uint64_t seed, unsigned jobs = 1);

std::string metrics_to_json(const MetricsReport& m);
std::string comparison_to_json(const ComparisonReport& r);
std::string comparison_to_csv(const ComparisonReport& r);
std::string history_to_csv(const TrainHistory& h);

}  // namespace gcnn
