#include "magan/nn/adamax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace magan::nn {

void AdamaxConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("Adamax alpha must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("Adamax beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("Adamax beta2 must lie in [0, 1)");
}

AdamaxState::AdamaxState(AdamaxConfig config) : config_(config) { config_.validate(); }

void AdamaxState::step(std::span<ad::Parameter* const> params) {
    if (t_ == 0 && mu_.empty()) {
        for (const auto* p : params) {
            mu_.emplace_back(p->value.size(), 0.0);
            u_.emplace_back(p->value.size(), 0.0);
        }
    }
    if (mu_.size() != params.size()) {
        throw ad::DimensionError("adamax: optimizer holds state for " + std::to_string(mu_.size()) +
                                 " parameters, got " + std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto* p = params[k];
        if (p->grad.size() != p->value.size() || mu_[k].size() != p->value.size()) {
            throw ad::DimensionError("adamax: shape mismatch for parameter '" + p->name + "'");
        }
        if (!p->grad.all_finite()) throw NonFiniteGradient("adamax: non-finite gradient for parameter '" + p->name + "'");
    }

    ++t_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double step = config_.alpha / (1.0 - std::pow(b1, static_cast<double>(t_)));
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& w = params[k]->value.storage();
        const auto& g = params[k]->grad.storage();
        auto& mu = mu_[k];
        auto& u = u_[k];
        for (std::size_t i = 0; i < w.size(); ++i) {
            mu[i] = b1 * mu[i] + (1.0 - b1) * g[i];
            u[i] = std::max(b2 * u[i], std::abs(g[i]));
            if (u[i] > 0.0) w[i] -= step * mu[i] / u[i];
        }
    }
}

void adamax_step(AdamaxState& state, std::span<ad::Parameter* const> params) { state.step(params); }

}  // namespace magan::nn
