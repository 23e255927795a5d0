#include "gcnn/metrics.hpp"

#include <cmath>
#include <string>

#include "gcnn/error.hpp"

namespace gcnn {

MetricsReport relative_error(std::span<const double> preds, std::span<const double> truths) {
    if (preds.size() != truths.size())
        throw LengthMismatch(std::to_string(preds.size()) + " predictions vs " + std::to_string(truths.size()) + " truths");
    if (preds.empty()) throw EmptyBatch("relative error of an empty set");
    MetricsReport r;
    r.sample_count = preds.size();
    double abs_sum = 0.0;
    double truth_sum = 0.0;
    r.pairs.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        abs_sum += std::abs(preds[i] - truths[i]);
        truth_sum += truths[i];
        r.pairs.emplace_back(truths[i], preds[i]);
    }
    const auto s = static_cast<double>(preds.size());
    r.mae = abs_sum / s;
    r.mu = truth_sum / s;
    if (!(r.mu > 0.0)) throw ZeroMeanTruth("mean ground-truth count is not positive");
    r.e = r.mae / r.mu;
    return r;
}

}  // namespace gcnn
