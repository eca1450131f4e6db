#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "magan/autodiff/graph.hpp"

namespace magan::nn {

enum class ActivationKind { identity, relu, leaky_relu, sigmoid, tanh };

struct Activation {
    ActivationKind kind = ActivationKind::identity;
    double slope = 0.2;  // leaky_relu only

    static Activation identity() { return {}; }
    static Activation relu() { return {ActivationKind::relu}; }
    static Activation leaky_relu(double slope = 0.2) { return {ActivationKind::leaky_relu, slope}; }
    static Activation sigmoid() { return {ActivationKind::sigmoid}; }
    static Activation tanh() { return {ActivationKind::tanh}; }

    friend bool operator==(const Activation&, const Activation&) = default;
};

std::string to_string(const Activation& a);
ad::Var apply(const Activation& a, ad::Var x);

/// Layer widths including the input width: {2, 4, 2} is 2 -> 4 -> 2, i.e. two
/// affine layers. The hidden activation follows every layer but the last.
struct MlpSpec {
    std::vector<std::size_t> widths;
    Activation hidden = Activation::leaky_relu();
    Activation output = Activation::identity();

    std::size_t layer_count() const { return widths.empty() ? 0 : widths.size() - 1; }
    void validate() const;
};

struct LinearLayer {
    ad::Parameter weights;  // [in x out]
    ad::Parameter bias;     // [out]
};

/// Whether a forward pass binds parameters as trainable leaves or as constants.
enum class Binding { trainable, frozen };

class Mlp {
public:
    Mlp() = default;
    Mlp(MlpSpec spec, std::vector<LinearLayer> layers);

    const MlpSpec& spec() const { return spec_; }
    std::vector<LinearLayer>& layers() { return layers_; }
    const std::vector<LinearLayer>& layers() const { return layers_; }

    std::size_t in_width() const { return spec_.widths.front(); }
    std::size_t out_width() const { return spec_.widths.back(); }
    std::size_t parameter_count() const;

    std::vector<ad::Parameter*> parameters();
    void zero_grad();

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    MlpSpec spec_;
    std::vector<LinearLayer> layers_;
};

/// Weights ~ U(-sqrt(6/(in+out)), +sqrt(6/(in+out))) from a generator seeded
/// with `seed`; biases are zero.
Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed);

/// Affine + hidden activation for every layer but the last, then affine +
/// output activation. x is [batch x in_width].
ad::Var forward_mlp(ad::Graph& g, Mlp& mlp, ad::Var x, Binding binding = Binding::trainable);

}  // namespace magan::nn
