#pragma once

#include <cstdint>
#include <vector>

#include "magan/autodiff/graph.hpp"
#include "magan/io/rng.hpp"
#include "magan/nn/adamax.hpp"
#include "magan/nn/mlp.hpp"

namespace magan::gan {

/// Fully-connected layout of the three networks.
///
/// Encoder: data_dim -> hidden x hidden_layers -> code_dim; the decoder mirrors
/// it back to data_dim; the generator maps latent_dim through the same hidden
/// stack to data_dim. The code should be narrower than the data: a code as wide
/// as the input lets the auto-encoder learn the identity and flattens the
/// energy landscape.
struct Architecture {
    std::size_t data_dim = 2;
    std::size_t latent_dim = 1;
    std::size_t code_dim = 1;
    std::size_t hidden_width = 32;
    std::size_t hidden_layers = 2;
    nn::Activation hidden = nn::Activation::leaky_relu(0.2);
    nn::Activation data_output = nn::Activation::identity();

    void validate() const;
};

nn::MlpSpec encoder_spec(const Architecture& arch);
nn::MlpSpec decoder_spec(const Architecture& arch);
nn::MlpSpec generator_spec(const Architecture& arch);

/// Latent width that brings the generator's parameter count closest to the
/// discriminator's (encoder + decoder).
std::size_t balanced_latent_dim(const Architecture& arch);

/// Auto-encoder discriminator (encoder, decoder) plus generator, each with
/// its own Adamax state.
struct GanModel {
    nn::Mlp encoder;
    nn::Mlp decoder;
    nn::Mlp generator;
    nn::AdamaxState disc_optimizer;
    nn::AdamaxState gen_optimizer;
    std::size_t latent_dim = 0;

    std::size_t data_dim() const { return encoder.in_width(); }
    std::vector<ad::Parameter*> disc_parameters();
    std::vector<ad::Parameter*> gen_parameters();
    void validate() const;

    friend bool operator==(const GanModel&, const GanModel&) = default;
};

GanModel make_model(const Architecture& arch, const nn::AdamaxConfig& opt, std::uint64_t seed);

/// Per-sample energy: mean over coordinates of (Dec(Enc(x)) - x)^2. x is
/// [batch x data_dim]; the result has shape [batch].
ad::Var energy(ad::Graph& g, GanModel& model, ad::Var x, nn::Binding disc_binding = nn::Binding::trainable);

/// Mean energy over the whole dataset (forward only, batched).
double mean_energy(GanModel& model, const ad::Tensor& points, std::size_t batch_size);

/// Generates `count` samples from latent vectors drawn from `rng` (forward only).
ad::Tensor generate(GanModel& model, std::size_t count, io::Rng& rng);

}  // namespace magan::gan
