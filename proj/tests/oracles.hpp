#pragma once

// Reference computations used as independent oracles by the test suites.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Central differences of f with respect to every coordinate of x.
inline std::vector<double> central_difference(const std::function<double()>& f, std::vector<double*> coords,
                                              double h = 1e-5) {
    std::vector<double> out;
    out.reserve(coords.size());
    for (double* c : coords) {
        const double saved = *c;
        *c = saved + h;
        const double up = f();
        *c = saved - h;
        const double down = f();
        *c = saved;
        out.push_back((up - down) / (2.0 * h));
    }
    return out;
}

inline double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / std::max(1.0, std::abs(analytic[i])));
    }
    return worst;
}

// Straightforward SplitMix64, written independently of the library.
struct SplitMix {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
};

}  // namespace oracle
