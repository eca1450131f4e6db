#include "magan/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "magan/autodiff/ops.hpp"
#include "magan/io/rng.hpp"

namespace magan::nn {

std::string to_string(const Activation& a) {
    switch (a.kind) {
        case ActivationKind::identity: return "identity";
        case ActivationKind::relu: return "relu";
        case ActivationKind::leaky_relu: return "leaky_relu(" + std::to_string(a.slope) + ")";
        case ActivationKind::sigmoid: return "sigmoid";
        case ActivationKind::tanh: return "tanh";
    }
    return "unknown";
}

ad::Var apply(const Activation& a, ad::Var x) {
    switch (a.kind) {
        case ActivationKind::identity: return x;
        case ActivationKind::relu: return ad::relu(x);
        case ActivationKind::leaky_relu: return ad::leaky_relu(x, a.slope);
        case ActivationKind::sigmoid: return ad::sigmoid(x);
        case ActivationKind::tanh: return ad::tanh(x);
    }
    throw std::invalid_argument("unknown activation kind");
}

void MlpSpec::validate() const {
    if (widths.size() < 2) throw std::invalid_argument("MlpSpec needs at least one layer (two widths)");
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] == 0) throw std::invalid_argument("MlpSpec width " + std::to_string(i) + " is zero");
    }
    for (const auto* a : {&hidden, &output}) {
        if (a->kind == ActivationKind::leaky_relu && !(a->slope > 0.0 && a->slope < 1.0)) {
            throw std::invalid_argument("leaky_relu slope must lie in (0, 1)");
        }
    }
}

Mlp::Mlp(MlpSpec spec, std::vector<LinearLayer> layers) : spec_(std::move(spec)), layers_(std::move(layers)) {
    spec_.validate();
    if (layers_.size() != spec_.layer_count()) throw std::invalid_argument("Mlp: layer count does not match spec");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const ad::Shape w{spec_.widths[i], spec_.widths[i + 1]};
        const ad::Shape b{spec_.widths[i + 1]};
        if (layers_[i].weights.value.shape() != w || layers_[i].bias.value.shape() != b) {
            throw ad::DimensionError("Mlp: layer " + std::to_string(i) + " parameter shapes do not match spec");
        }
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.value.size() + l.bias.value.size();
    return n;
}

std::vector<ad::Parameter*> Mlp::parameters() {
    std::vector<ad::Parameter*> out;
    out.reserve(2 * layers_.size());
    for (auto& l : layers_) {
        out.push_back(&l.weights);
        out.push_back(&l.bias);
    }
    return out;
}

void Mlp::zero_grad() {
    for (auto* p : parameters()) p->zero_grad();
}

bool operator==(const Mlp& a, const Mlp& b) {
    if (a.spec_.widths != b.spec_.widths || a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
        if (a.layers_[i].weights.value != b.layers_[i].weights.value) return false;
        if (a.layers_[i].bias.value != b.layers_[i].bias.value) return false;
    }
    return true;
}

Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    io::Rng rng(seed);
    std::vector<LinearLayer> layers;
    for (std::size_t i = 0; i + 1 < spec.widths.size(); ++i) {
        const std::size_t in = spec.widths[i], out = spec.widths[i + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        ad::Tensor w({in, out});
        for (auto& v : w.storage()) v = limit * (2.0 * rng.uniform() - 1.0);
        const std::string prefix = "layer" + std::to_string(i);
        layers.push_back({ad::Parameter(prefix + ".weights", std::move(w)),
                          ad::Parameter(prefix + ".bias", ad::Tensor({out}))});
    }
    return Mlp(spec, std::move(layers));
}

ad::Var forward_mlp(ad::Graph& g, Mlp& mlp, ad::Var x, Binding binding) {
    if (x.value().rank() != 2 || x.value().cols() != mlp.in_width()) {
        throw ad::DimensionError("forward_mlp: input " + ad::shape_string(x.shape()) + " does not match input width " +
                                 std::to_string(mlp.in_width()));
    }
    auto bind = [&](ad::Parameter& p) {
        return binding == Binding::trainable ? g.parameter(p) : g.constant(p.value);
    };
    ad::Var h = x;
    const auto& layers = mlp.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        auto& layer = mlp.layers()[i];
        h = ad::add_bias(ad::matmul(h, bind(layer.weights)), bind(layer.bias));
        h = apply(i + 1 == layers.size() ? mlp.spec().output : mlp.spec().hidden, h);
    }
    return h;
}

}  // namespace magan::nn
