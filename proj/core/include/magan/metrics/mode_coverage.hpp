#pragma once

#include <cstddef>
#include <vector>

#include "magan/autodiff/tensor.hpp"

namespace magan::metrics {

struct ModeHistogram {
    std::vector<std::size_t> counts;  // per mode
    std::size_t unassigned = 0;
    std::size_t covered = 0;          // modes holding >= min_fraction of assigned samples
    std::size_t total = 0;

    std::size_t mode_count() const { return counts.size(); }
};

/// Assigns each sample (row of `samples`) to its nearest center when it lies
/// within radius_multiple * sigma of it; otherwise it is unassigned.
ModeHistogram mode_coverage(const ad::Tensor& samples, const ad::Tensor& centers, double sigma,
                            double radius_multiple, double min_fraction);

}  // namespace magan::metrics
