#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "magan/autodiff/graph.hpp"

namespace magan::ad {

/// Builds a scalar loss on a fresh graph; parameters are bound inside via Graph::parameter.
using LossBuilder = std::function<Var(Graph&)>;

/// Raised when the loss is not finite at a probed point; names the coordinate.
class NonFiniteError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct GradcheckResult {
    double max_rel_error = 0.0;
    std::size_t worst_param = 0;
    std::size_t worst_index = 0;
};

/// Compares the reverse-mode gradient of `loss` w.r.t. every coordinate of
/// `params` against central differences with step h:
///   max |analytic - fd| / max(1, |analytic|).
/// Parameter values are restored before returning; their grads are overwritten.
GradcheckResult gradcheck(const LossBuilder& loss, std::span<Parameter* const> params, double h = 1e-5);

/// Single-tensor form: f maps the bound point to a scalar.
double gradcheck(const std::function<Var(Graph&, Var)>& f, const Tensor& point, double h = 1e-5);

}  // namespace magan::ad
