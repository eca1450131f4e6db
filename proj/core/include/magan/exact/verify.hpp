#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace magan::exact {

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::size_t trials = 1000;          // random pairs per identity check
    std::size_t min_support = 2;
    std::size_t max_support = 64;
    double max_margin = 10.0;           // margins drawn from (0, max_margin]
    double tolerance = 1e-12;

    bool convergence = true;            // run the dynamics checks as well
    std::size_t starts = 100;
    std::size_t sim_support = 16;
    double ebgan_eta = 1e-5;            // fixed-margin step; TV settles near K*eta*m
    double magan_eta = 1.0;             // deliberately oversized
    std::size_t max_steps = 100000;
    double tv_tolerance = 1e-6;
    double required_fraction = 0.95;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst = 0.0;   // largest residual, or the success count for dynamics checks
    std::string detail;
};

/// Randomized checks of the optimal-discriminator theory on finite supports:
/// energy ordering and its equality case, the TV identity, the margin
/// recurrence, re-optimization invariance of E_gen, the exact gradient
/// displacement, simplex projection optimality and, optionally, the
/// convergence of the idealized dynamics. Deterministic under `seed`.
std::vector<CheckResult> run_theory_suite(const VerifyOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace magan::exact
