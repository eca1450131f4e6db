#include "magan/metrics/mode_coverage.hpp"

#include <limits>
#include <stdexcept>

namespace magan::metrics {

ModeHistogram mode_coverage(const ad::Tensor& samples, const ad::Tensor& centers, double sigma,
                            double radius_multiple, double min_fraction) {
    if (samples.rank() != 2 || samples.rows() == 0) throw std::invalid_argument("mode_coverage: empty sample set");
    if (centers.rank() != 2 || centers.rows() == 0) throw std::invalid_argument("mode_coverage: need at least one center");
    if (samples.cols() != centers.cols()) throw ad::DimensionError("mode_coverage: sample and center widths differ");
    if (!(radius_multiple > 0.0)) throw std::invalid_argument("mode_coverage: radius multiple must be positive");

    const std::size_t dim = samples.cols();
    const double radius = radius_multiple * sigma;
    const double radius_sq = radius * radius;

    ModeHistogram h;
    h.counts.assign(centers.rows(), 0);
    h.total = samples.rows();
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        std::size_t best = 0;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.rows(); ++c) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = samples.at(i, k) - centers.at(c, k);
                d2 += diff * diff;
            }
            if (d2 < best_sq) {
                best_sq = d2;
                best = c;
            }
        }
        if (best_sq <= radius_sq) {
            ++h.counts[best];
        } else {
            ++h.unassigned;
        }
    }
    const std::size_t assigned = h.total - h.unassigned;
    if (assigned > 0) {
        for (auto c : h.counts) {
            if (c > 0 && static_cast<double>(c) >= min_fraction * static_cast<double>(assigned)) ++h.covered;
        }
    }
    return h;
}

}  // namespace magan::metrics
