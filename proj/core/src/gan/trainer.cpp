#include "magan/gan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magan/autodiff/ops.hpp"
#include "magan/gan/losses.hpp"

namespace magan::gan {

std::string to_string(TrainMode mode) { return mode == TrainMode::magan ? "magan" : "ebgan"; }

TrainMode parse_train_mode(const std::string& name) {
    if (name == "magan") return TrainMode::magan;
    if (name == "ebgan") return TrainMode::ebgan;
    throw std::invalid_argument("mode: expected magan or ebgan, got '" + name + "'");
}

void TrainConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) { throw InvalidConfig(key, why); };
    if (!(optimizer.alpha > 0.0) || !std::isfinite(optimizer.alpha)) fail("alpha", "must be positive");
    if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0)) fail("beta1", "must lie in [0, 1)");
    if (!(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) fail("beta2", "must lie in [0, 1)");
    if (batch_size == 0) fail("b", "must be positive");
    if (train_size == 0) fail("n", "must be positive");
    if (batch_size > train_size) fail("b", "must not exceed n");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail("sigma", "must be >= 0");
    if (arch.latent_dim == 0) fail("n_z", "must be positive");
    if (arch.hidden_width == 0) fail("hidden_width", "must be positive");
    if (arch.code_dim == 0) fail("code_dim", "must be positive");
    if (mode == TrainMode::ebgan) {
        if (!fixed_margin) fail("margin", "ebgan mode requires a fixed margin");
        if (!(*fixed_margin > 0.0) || !std::isfinite(*fixed_margin)) fail("margin", "must be positive");
    }
}

namespace {

std::vector<std::size_t> shuffled(std::size_t n, io::Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
    return idx;
}

double sum_of(const ad::Var& v) {
    double s = 0.0;
    for (double x : v.value().data()) s += x;
    return s;
}

void check_finite(double loss, const char* what, std::size_t epoch, std::size_t batch) {
    if (!std::isfinite(loss)) {
        throw TrainingDiverged(std::string(what) + " loss is not finite at epoch " + std::to_string(epoch) +
                               ", batch " + std::to_string(batch));
    }
}

void discriminator_step(GanModel& model, ad::Graph& g, ad::Var loss) {
    auto params = model.disc_parameters();
    for (auto* p : params) p->zero_grad();
    g.backward(loss);
    model.disc_optimizer.step(params);
}

}  // namespace

double pretrain(GanModel& model, const io::Dataset& data, std::size_t epochs, std::size_t batch_size, io::Rng& rng) {
    if (data.size() == 0) throw std::invalid_argument("pretrain: dataset is empty");
    if (batch_size == 0 || batch_size > data.size()) throw std::invalid_argument("pretrain: invalid batch size");
    const std::size_t batches = data.size() / batch_size;
    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        const auto order = shuffled(data.size(), rng);
        for (std::size_t j = 0; j < batches; ++j) {
            ad::Graph g;
            ad::Var x = g.constant(data.gather(std::span(order).subspan(j * batch_size, batch_size)));
            ad::Var e_real = energy(g, model, x);
            // The margin is 0 during pre-training, so no latent batch enters the loss.
            ad::Var loss = ad::mean(e_real);
            check_finite(loss.value().item(), "pre-training", epoch, j + 1);
            discriminator_step(model, g, loss);
        }
    }
    const double m1 = mean_energy(model, data.points(), batch_size);
    if (!std::isfinite(m1)) throw TrainingDiverged("pre-training produced a non-finite mean energy");
    return m1;
}

EpochRecord train_epoch(GanModel& model, MarginState& ms, const io::Dataset& data, const TrainConfig& config,
                        io::Rng& rng, std::size_t epoch_index) {
    const std::size_t b = config.batch_size;
    const std::size_t batches = data.size() / b;
    if (batches == 0) throw std::invalid_argument("train_epoch: batch size exceeds dataset size");

    EpochRecord rec;
    rec.epoch = epoch_index;
    rec.margin = ms.margin;
    rec.batch_real_sums.reserve(batches);
    rec.batch_fake_sums.reserve(batches);

    const auto order = shuffled(data.size(), rng);
    for (std::size_t j = 0; j < batches; ++j) {
        double real_sum = 0.0;
        {
            ad::Graph g;
            ad::Var x = g.constant(data.gather(std::span(order).subspan(j * b, b)));
            ad::Tensor z({b, model.latent_dim});
            rng.fill_normal(z.data());
            ad::Var fake = nn::forward_mlp(g, model.generator, g.constant(std::move(z)), nn::Binding::frozen);
            ad::Var e_real = energy(g, model, x);
            ad::Var e_fake = energy(g, model, fake);
            ad::Var loss = disc_loss(e_real, e_fake, ms.margin);
            check_finite(loss.value().item(), "discriminator", epoch_index, j + 1);
            real_sum = sum_of(e_real);
            discriminator_step(model, g, loss);
        }
        double fake_sum = 0.0;
        {
            ad::Graph g;
            ad::Tensor z({b, model.latent_dim});
            rng.fill_normal(z.data());
            ad::Var fake = nn::forward_mlp(g, model.generator, g.constant(std::move(z)));
            ad::Var e_fake = energy(g, model, fake, nn::Binding::frozen);
            ad::Var loss = gen_loss(e_fake);
            check_finite(loss.value().item(), "generator", epoch_index, j + 1);
            fake_sum = sum_of(e_fake);
            auto params = model.gen_parameters();
            for (auto* p : params) p->zero_grad();
            g.backward(loss);
            model.gen_optimizer.step(params);
        }
        ms.accumulate(real_sum, fake_sum, b);
        rec.batch_real_sums.push_back(real_sum);
        rec.batch_fake_sums.push_back(fake_sum);
    }

    const std::size_t n_eff = ms.samples_seen;
    rec.e_real = ms.s_data / static_cast<double>(n_eff);
    rec.e_fake = ms.s_gen / static_cast<double>(n_eff);
    rec.margin_updated = close_epoch(ms, n_eff, config.mode == TrainMode::magan);
    return rec;
}

RunSeeds derive_seeds(std::uint64_t seed) {
    io::Rng master(seed);
    RunSeeds s;
    s.data = master.split();
    s.model = master.split();
    s.training = master.split();
    return s;
}

RunSetup make_run_setup(const TrainConfig& config) {
    const RunSeeds seeds = derive_seeds(config.seed);
    return {make_model(config.arch, config.optimizer, seeds.model), io::Rng(seeds.training)};
}

RunResult train(const TrainConfig& config, const io::Dataset& data, const EpochHook& hook) {
    config.validate();
    if (data.dim != config.arch.data_dim) throw std::invalid_argument("train: dataset dimension does not match n_x");
    auto [model, rng] = make_run_setup(config);

    MarginState ms;
    if (config.mode == TrainMode::magan) {
        ms.margin = pretrain(model, data, config.pretrain_epochs, config.batch_size, rng);
    } else {
        ms.margin = *config.fixed_margin;
    }

    RunResult result{{}, {}};
    result.trace.initial_margin = ms.margin;
    result.trace.epochs.reserve(config.max_epochs);
    for (std::size_t t = 1; t <= config.max_epochs; ++t) {
        EpochRecord rec = train_epoch(model, ms, data, config, rng, t);
        if (hook) hook(model, rec);
        result.trace.epochs.push_back(std::move(rec));
    }
    result.trace.final_margin = ms.margin;
    result.model = std::move(model);
    return result;
}

RunResult train(const TrainConfig& config, const EpochHook& hook) {
    config.validate();
    const io::Dataset data = io::make_dataset(config.dataset, config.train_size, config.sigma, derive_seeds(config.seed).data);
    return train(config, data, hook);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("pearson: need two equal series of length >= 2");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace magan::gan
