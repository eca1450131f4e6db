#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "magan/autodiff/tensor.hpp"

namespace magan::io {

enum class DatasetId { ring8, grid25, two_moons };

std::string to_string(DatasetId id);
DatasetId parse_dataset_id(std::string_view name);

/// Row-major sample matrix with optional labels and, for synthetic mixtures,
/// the mode centers and per-mode standard deviation.
struct Dataset {
    std::string id;
    std::size_t dim = 0;
    std::vector<double> values;        // size() * dim
    std::vector<std::size_t> labels;   // empty or size()
    std::vector<double> centers;       // mode_count() * dim
    double sigma = 0.0;

    std::size_t size() const { return dim == 0 ? labels.size() : values.size() / dim; }
    std::size_t mode_count() const { return dim == 0 ? 0 : centers.size() / dim; }
    std::span<const double> point(std::size_t i) const { return {values.data() + i * dim, dim}; }

    ad::Tensor points() const;
    ad::Tensor center_matrix() const;
    /// Gathers rows `indices` into a [indices.size() x dim] tensor.
    ad::Tensor gather(std::span<const std::size_t> indices) const;

    void validate() const;
};

/// Mode centers of the synthetic sets: ring8 has 8 points at angles k*45 deg on
/// a radius-2 circle; grid25 is the 5x5 grid {-4,-2,0,2,4}^2. two_moons has none.
std::vector<double> mode_centers(DatasetId id);

/// n samples of the chosen mixture with per-mode noise sigma. Mixture labels
/// are drawn uniformly. two_moons follows the usual interleaved-crescent
/// construction (upper arc (cos t, sin t), lower arc (1 - cos t, 0.5 - sin t),
/// t ~ U[0, pi]) with isotropic noise sigma.
Dataset make_dataset(DatasetId id, std::size_t n, double sigma, std::uint64_t seed);

/// Degenerate sampler for diagnostics: n samples all drawn around center
/// `mode` of a mixture with centers (ring8 or grid25).
Dataset make_collapsed_dataset(DatasetId id, std::size_t n, double sigma, std::size_t mode, std::uint64_t seed);

}  // namespace magan::io
