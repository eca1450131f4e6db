#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "magan/autodiff/tensor.hpp"

namespace magan::nn {

struct AdamaxConfig {
    double alpha = 0.0005;
    double beta1 = 0.5;
    double beta2 = 0.999;

    void validate() const;

    friend bool operator==(const AdamaxConfig&, const AdamaxConfig&) = default;
};

/// Raised when a gradient handed to the optimizer is NaN or infinite.
class NonFiniteGradient : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adamax optimizer state: first moment mu and infinity-norm accumulator u per
/// parameter, both zero-initialised and sized on the first step.
///
/// One step, for gradient g:
///   t  <- t + 1
///   mu <- beta1 * mu + (1 - beta1) * g
///   u  <- max(beta2 * u, |g|)
///   w  <- w - alpha / (1 - beta1^t) * mu / u      (mu / u := 0 where u == 0)
///
/// The update always descends the loss whose gradient is passed in.
class AdamaxState {
public:
    AdamaxState() = default;
    explicit AdamaxState(AdamaxConfig config);

    const AdamaxConfig& config() const { return config_; }
    std::uint64_t step_count() const { return t_; }
    const std::vector<std::vector<double>>& first_moment() const { return mu_; }
    const std::vector<std::vector<double>>& inf_norm() const { return u_; }

    /// Applies one update to every parameter from its accumulated grad.
    /// Nothing is modified if any gradient is non-finite.
    void step(std::span<ad::Parameter* const> params);

    friend bool operator==(const AdamaxState&, const AdamaxState&) = default;

private:
    AdamaxConfig config_;
    std::uint64_t t_ = 0;
    std::vector<std::vector<double>> mu_;
    std::vector<std::vector<double>> u_;
};

void adamax_step(AdamaxState& state, std::span<ad::Parameter* const> params);

}  // namespace magan::nn
