#include "magan/gan/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "magan/autodiff/ops.hpp"

namespace magan::gan {

void Architecture::validate() const {
    if (data_dim == 0 || latent_dim == 0 || code_dim == 0 || hidden_width == 0) {
        throw std::invalid_argument("architecture widths must be positive");
    }
}

namespace {

nn::MlpSpec stack(std::size_t in, std::size_t out, const Architecture& arch, nn::Activation output) {
    nn::MlpSpec spec;
    spec.widths.push_back(in);
    for (std::size_t i = 0; i < arch.hidden_layers; ++i) spec.widths.push_back(arch.hidden_width);
    spec.widths.push_back(out);
    spec.hidden = arch.hidden;
    spec.output = output;
    return spec;
}

std::size_t count_params(const nn::MlpSpec& spec) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < spec.widths.size(); ++i) n += spec.widths[i] * spec.widths[i + 1] + spec.widths[i + 1];
    return n;
}

}  // namespace

nn::MlpSpec encoder_spec(const Architecture& arch) {
    return stack(arch.data_dim, arch.code_dim, arch, nn::Activation::identity());
}

nn::MlpSpec decoder_spec(const Architecture& arch) {
    return stack(arch.code_dim, arch.data_dim, arch, arch.data_output);
}

nn::MlpSpec generator_spec(const Architecture& arch) {
    return stack(arch.latent_dim, arch.data_dim, arch, arch.data_output);
}

std::size_t balanced_latent_dim(const Architecture& arch) {
    const auto disc = static_cast<double>(count_params(encoder_spec(arch)) + count_params(decoder_spec(arch)));
    Architecture probe = arch;
    probe.latent_dim = 1;
    const auto base = static_cast<double>(count_params(generator_spec(probe)));
    // Each extra latent unit adds one row to the first weight matrix.
    const auto per_unit = static_cast<double>(arch.hidden_layers == 0 ? arch.data_dim : arch.hidden_width);
    const double extra = std::round((disc - base) / per_unit);
    return static_cast<std::size_t>(std::max(1.0, 1.0 + extra));
}

std::vector<ad::Parameter*> GanModel::disc_parameters() {
    auto out = encoder.parameters();
    auto dec = decoder.parameters();
    out.insert(out.end(), dec.begin(), dec.end());
    return out;
}

std::vector<ad::Parameter*> GanModel::gen_parameters() { return generator.parameters(); }

void GanModel::validate() const {
    if (decoder.out_width() != encoder.in_width()) throw std::invalid_argument("decoder output width != data width");
    if (encoder.out_width() != decoder.in_width()) throw std::invalid_argument("encoder code width != decoder input");
    if (generator.out_width() != encoder.in_width()) throw std::invalid_argument("generator output width != data width");
    if (generator.in_width() != latent_dim) throw std::invalid_argument("generator input width != latent dim");
}

GanModel make_model(const Architecture& arch, const nn::AdamaxConfig& opt, std::uint64_t seed) {
    arch.validate();
    io::Rng seeds(seed);
    GanModel model;
    model.encoder = nn::init_mlp(encoder_spec(arch), seeds.split());
    model.decoder = nn::init_mlp(decoder_spec(arch), seeds.split());
    model.generator = nn::init_mlp(generator_spec(arch), seeds.split());
    model.disc_optimizer = nn::AdamaxState(opt);
    model.gen_optimizer = nn::AdamaxState(opt);
    model.latent_dim = arch.latent_dim;
    model.validate();
    return model;
}

ad::Var energy(ad::Graph& g, GanModel& model, ad::Var x, nn::Binding disc_binding) {
    if (x.value().rank() != 2 || x.value().cols() != model.data_dim()) {
        throw ad::DimensionError("energy: input " + ad::shape_string(x.shape()) + " does not match data width " +
                                 std::to_string(model.data_dim()));
    }
    ad::Var code = nn::forward_mlp(g, model.encoder, x, disc_binding);
    ad::Var rec = nn::forward_mlp(g, model.decoder, code, disc_binding);
    return ad::mean(ad::square(ad::sub(rec, x)), 1);
}

double mean_energy(GanModel& model, const ad::Tensor& points, std::size_t batch_size) {
    const std::size_t n = points.rows(), dim = points.cols();
    if (batch_size == 0) throw std::invalid_argument("mean_energy: batch size must be positive");
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t rows = std::min(batch_size, n - start);
        ad::Tensor chunk({rows, dim}, std::vector<double>(points.storage().begin() + static_cast<std::ptrdiff_t>(start * dim),
                                                          points.storage().begin() +
                                                              static_cast<std::ptrdiff_t>((start + rows) * dim)));
        ad::Graph g;
        ad::Var e = energy(g, model, g.constant(std::move(chunk)), nn::Binding::frozen);
        for (double v : e.value().data()) total += v;
    }
    return total / static_cast<double>(n);
}

ad::Tensor generate(GanModel& model, std::size_t count, io::Rng& rng) {
    ad::Tensor z({count, model.latent_dim});
    rng.fill_normal(z.data());
    ad::Graph g;
    return nn::forward_mlp(g, model.generator, g.constant(std::move(z)), nn::Binding::frozen).value();
}

}  // namespace magan::gan
