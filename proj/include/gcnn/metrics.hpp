#pragma once

#include <span>
#include <utility>
#include <vector>

namespace gcnn {

/// mae = mean |c'_i - c_i|, mu = mean c_i, e = mae / mu.
struct MetricsReport {
    double mae = 0.0;
    double mu = 0.0;
    double e = 0.0;
    std::size_t sample_count = 0;
    std::vector<std::pair<double, double>> pairs;  // (truth, prediction)
};

/// Throws LengthMismatch, EmptyBatch for empty input, ZeroMeanTruth when mu <= 0.
MetricsReport relative_error(std::span<const double> preds, std::span<const double> truths);

}  // namespace gcnn
