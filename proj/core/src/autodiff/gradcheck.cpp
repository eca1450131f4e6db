#include "magan/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace magan::ad {

namespace {

double evaluate(const LossBuilder& loss) {
    Graph g;
    return loss(g).value().item();
}

}  // namespace

GradcheckResult gradcheck(const LossBuilder& loss, std::span<Parameter* const> params, double h) {
    for (Parameter* p : params) p->zero_grad();
    {
        Graph g;
        Var root = loss(g);
        if (!std::isfinite(root.value().item())) throw NonFiniteError("gradcheck: loss is not finite at the base point");
        g.backward(root);
    }
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) analytic.push_back(p->grad);

    GradcheckResult result;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double saved = p.value[i];
            p.value[i] = saved + h;
            const double up = evaluate(loss);
            p.value[i] = saved - h;
            const double down = evaluate(loss);
            p.value[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down)) {
                throw NonFiniteError("gradcheck: non-finite loss when perturbing parameter '" + p.name +
                                     "' coordinate " + std::to_string(i));
            }
            const double fd = (up - down) / (2.0 * h);
            const double a = analytic[pi][i];
            const double err = std::abs(a - fd) / std::max(1.0, std::abs(a));
            if (err > result.max_rel_error) result = {err, pi, i};
        }
    }
    return result;
}

double gradcheck(const std::function<Var(Graph&, Var)>& f, const Tensor& point, double h) {
    Parameter p("x", point);
    Parameter* params[] = {&p};
    return gradcheck([&](Graph& g) { return f(g, g.parameter(p)); }, params, h).max_rel_error;
}

}  // namespace magan::ad
