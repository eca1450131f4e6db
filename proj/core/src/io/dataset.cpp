#include "magan/io/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magan/io/rng.hpp"

namespace magan::io {

std::string to_string(DatasetId id) {
    switch (id) {
        case DatasetId::ring8: return "ring8";
        case DatasetId::grid25: return "grid25";
        case DatasetId::two_moons: return "two-moons";
    }
    return "unknown";
}

DatasetId parse_dataset_id(std::string_view name) {
    if (name == "ring8") return DatasetId::ring8;
    if (name == "grid25") return DatasetId::grid25;
    if (name == "two-moons" || name == "two_moons") return DatasetId::two_moons;
    throw std::invalid_argument("unknown dataset id '" + std::string(name) + "' (expected ring8, grid25 or two-moons)");
}

ad::Tensor Dataset::points() const { return ad::Tensor({size(), dim}, values); }

ad::Tensor Dataset::center_matrix() const {
    if (centers.empty()) throw std::logic_error("dataset '" + id + "' has no mode centers");
    return ad::Tensor({mode_count(), dim}, centers);
}

ad::Tensor Dataset::gather(std::span<const std::size_t> indices) const {
    ad::Tensor out({indices.size(), dim});
    auto& dst = out.storage();
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const double* src = values.data() + indices[r] * dim;
        std::copy(src, src + dim, dst.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
    return out;
}

void Dataset::validate() const {
    if (dim != 0 && values.size() % dim != 0) throw std::invalid_argument("dataset values are not a multiple of dim");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("dataset '" + id + "' contains a non-finite sample");
    }
    if (!labels.empty() && dim != 0 && labels.size() != size()) {
        throw std::invalid_argument("dataset '" + id + "' label count does not match sample count");
    }
    const std::size_t modes = mode_count();
    if (modes > 0) {
        for (auto l : labels) {
            if (l >= modes) throw std::invalid_argument("dataset '" + id + "' has a label outside the mode range");
        }
    }
}

std::vector<double> mode_centers(DatasetId id) {
    std::vector<double> c;
    switch (id) {
        case DatasetId::ring8:
            for (int k = 0; k < 8; ++k) {
                const double angle = k * std::numbers::pi / 4.0;
                c.push_back(2.0 * std::cos(angle));
                c.push_back(2.0 * std::sin(angle));
            }
            break;
        case DatasetId::grid25:
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) {
                    c.push_back(-4.0 + 2.0 * i);
                    c.push_back(-4.0 + 2.0 * j);
                }
            break;
        case DatasetId::two_moons:
            break;
    }
    return c;
}

Dataset make_dataset(DatasetId id, std::size_t n, double sigma, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("make_dataset: n must be at least 1");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("make_dataset: sigma must be >= 0");

    Rng rng(seed);
    Dataset d;
    d.id = to_string(id);
    d.dim = 2;
    d.sigma = sigma;
    d.centers = mode_centers(id);
    d.values.reserve(2 * n);
    d.labels.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        double x, y;
        std::size_t label;
        if (id == DatasetId::two_moons) {
            label = static_cast<std::size_t>(rng.uniform_index(2));
            const double t = std::numbers::pi * rng.uniform();
            if (label == 0) {
                x = std::cos(t);
                y = std::sin(t);
            } else {
                x = 1.0 - std::cos(t);
                y = 0.5 - std::sin(t);
            }
        } else {
            label = static_cast<std::size_t>(rng.uniform_index(d.mode_count()));
            x = d.centers[2 * label];
            y = d.centers[2 * label + 1];
        }
        const double nx = rng.normal();
        const double ny = rng.normal();
        d.values.push_back(x + sigma * nx);
        d.values.push_back(y + sigma * ny);
        d.labels.push_back(label);
    }
    return d;
}

Dataset make_collapsed_dataset(DatasetId id, std::size_t n, double sigma, std::size_t mode, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("make_collapsed_dataset: n must be at least 1");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("make_collapsed_dataset: sigma must be >= 0");
    Dataset d;
    d.id = to_string(id) + "-collapsed";
    d.dim = 2;
    d.sigma = sigma;
    d.centers = mode_centers(id);
    if (mode >= d.mode_count()) throw std::invalid_argument("make_collapsed_dataset: mode out of range");

    Rng rng(seed);
    d.values.reserve(2 * n);
    d.labels.assign(n, mode);
    for (std::size_t i = 0; i < n; ++i) {
        const double nx = rng.normal();
        const double ny = rng.normal();
        d.values.push_back(d.centers[2 * mode] + sigma * nx);
        d.values.push_back(d.centers[2 * mode + 1] + sigma * ny);
    }
    return d;
}

}  // namespace magan::io
