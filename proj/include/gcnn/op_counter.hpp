#pragma once

#include <cstdint>

namespace gcnn {

/// Tally of comparison operations: adjacency-matrix membership tests and
/// explicit branch comparisons in estimator inner loops. Loop-index
/// bookkeeping is not counted.
class OpCounter {
public:
    void add(std::uint64_t n = 1) { comparisons_ += n; }
    std::uint64_t comparisons() const { return comparisons_; }

private:
    std::uint64_t comparisons_ = 0;
};

}  // namespace gcnn
