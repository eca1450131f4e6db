#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "magan/autodiff/gradcheck.hpp"
#include "magan/autodiff/ops.hpp"
#include "magan/gan/losses.hpp"
#include "magan/gan/margin.hpp"
#include "magan/gan/model.hpp"
#include "magan/gan/trainer.hpp"
#include "magan/io/dataset.hpp"

using namespace magan;
using ad::Graph;
using ad::Tensor;
using ad::Var;

namespace {

gan::TrainConfig small_config() {
    gan::TrainConfig c;
    c.train_size = 256;
    c.batch_size = 32;
    c.max_epochs = 3;
    c.arch.hidden_width = 8;
    c.arch.code_dim = 1;
    c.optimizer.alpha = 0.01;
    return c;
}

std::vector<double> disc_grads(gan::GanModel& m) {
    std::vector<double> out;
    for (auto* p : m.disc_parameters()) out.insert(out.end(), p->grad.storage().begin(), p->grad.storage().end());
    return out;
}

nn::Mlp linear(std::size_t in, std::size_t out, const Tensor& w) {
    nn::Mlp m = nn::init_mlp(nn::MlpSpec{{in, out}}, 0);
    m.layers()[0].weights.value = w;
    return m;
}

gan::MarginState state(double m, double s_data, double s_gen, double prev) {
    gan::MarginState ms;
    ms.margin = m;
    ms.s_data = s_data;
    ms.s_gen = s_gen;
    ms.prev_s_gen = prev;
    return ms;
}

}  // namespace

TEST_CASE("energy of a perfect auto-encoder is zero") {
    gan::Architecture arch;
    gan::GanModel model = gan::make_model(arch, {}, 1);
    model.encoder = linear(2, 2, Tensor::matrix({{1, 0}, {0, 1}}));
    model.decoder = linear(2, 2, Tensor::matrix({{1, 0}, {0, 1}}));
    Graph g;
    const Var e = gan::energy(g, model, g.constant(Tensor::matrix({{1, 2}, {-3, 0.5}, {0, 0}})));
    CHECK(e.value() == Tensor::vector({0, 0, 0}));
}

TEST_CASE("energy of a zero reconstruction is the mean square of x") {
    gan::Architecture arch;
    arch.data_dim = 4;
    gan::GanModel model = gan::make_model(arch, {}, 1);
    for (auto* p : model.decoder.parameters()) p->value.fill(0.0);
    Graph g;
    const Var e = gan::energy(g, model, g.constant(Tensor::filled({2, 4}, 1.0)));
    CHECK(e.value() == Tensor::vector({1.0, 1.0}));
    CHECK_THROWS_AS(gan::energy(g, model, g.constant(Tensor::filled({2, 3}, 1.0))), ad::DimensionError);
}

TEST_CASE("mean-batch energy gradient matches finite differences") {
    gan::Architecture arch;
    arch.hidden_width = 6;
    arch.hidden = nn::Activation::tanh();
    gan::GanModel model = gan::make_model(arch, {}, 3);
    io::Rng rng(2);
    Tensor x({7, 2});
    rng.fill_normal(x.data());
    const ad::LossBuilder loss = [&](Graph& g) { return ad::mean(gan::energy(g, model, g.constant(x))); };
    const auto params = model.disc_parameters();
    CHECK(ad::gradcheck(loss, params).max_rel_error < 1e-5);
}

TEST_CASE("disc_loss examples") {
    Graph g;
    const auto v = [&](double x) { return g.constant(Tensor::vector({x})); };
    CHECK(gan::disc_loss(v(0.5), v(0.3), 1.0).value().item() == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(gan::disc_loss(v(0.5), v(2.0), 1.0).value().item() == 0.5);
    CHECK(gan::disc_loss(v(0.5), v(0.3), 0.0).value().item() == 0.5);
    CHECK_THROWS_AS(gan::disc_loss(v(0.5), v(0.3), -1.0), std::invalid_argument);
}

TEST_CASE("m = 0 disconnects the generator path") {
    gan::GanModel model = gan::make_model(gan::Architecture{}, {}, 4);
    Graph g;
    Tensor z({5, model.latent_dim});
    z.fill(0.7);
    const Var fake = nn::forward_mlp(g, model.generator, g.constant(z));
    const Var e_real = gan::energy(g, model, g.constant(Tensor::filled({5, 2}, 0.3)));
    const Var e_fake = gan::energy(g, model, fake);
    const Var loss = gan::disc_loss(e_real, e_fake, 0.0);
    CHECK(loss.value().item() == ad::mean(e_real).value().item());
    for (auto* p : model.gen_parameters()) p->zero_grad();
    g.backward(loss);
    for (auto* p : model.gen_parameters()) {
        for (double v : p->grad.storage()) CHECK(v == 0.0);
    }
}

TEST_CASE("gen_loss examples") {
    Graph g;
    CHECK(gan::gen_loss(g.constant(Tensor::vector({0.2, 0.4}))).value().item() == doctest::Approx(0.3).epsilon(1e-15));
    double prev = std::numeric_limits<double>::infinity();
    for (double e : {0.9, 0.5, 0.1}) {
        const double now = gan::gen_loss(g.constant(Tensor::vector({e, 0.2}))).value().item();
        CHECK(now < prev);
        prev = now;
    }
}

TEST_CASE("generator step leaves discriminator gradients at zero") {
    gan::GanModel model = gan::make_model(gan::Architecture{}, {}, 5);
    for (auto* p : model.disc_parameters()) p->zero_grad();
    for (auto* p : model.gen_parameters()) p->zero_grad();
    Graph g;
    Tensor z({4, model.latent_dim});
    z.fill(-0.4);
    const Var fake = nn::forward_mlp(g, model.generator, g.constant(z));
    g.backward(gan::gen_loss(gan::energy(g, model, fake, nn::Binding::frozen)));
    for (double v : disc_grads(model)) CHECK(v == 0.0);
    double norm = 0.0;
    for (auto* p : model.gen_parameters())
        for (double v : p->grad.storage()) norm += std::abs(v);
    CHECK(norm > 0.0);
}

TEST_CASE("hinge dead zone: discriminator gradient equals the pure auto-encoder gradient") {
    gan::GanModel model = gan::make_model(gan::Architecture{}, {}, 6);
    io::Rng rng(9);
    Tensor x({8, 2}), fake({8, 2});
    rng.fill_normal(x.data());
    rng.fill_normal(fake.data());
    for (auto& v : fake.storage()) v *= 10.0;  // far from the data, so energies are large

    double min_fake = 0.0;
    {
        Graph g;
        const Var e = gan::energy(g, model, g.constant(fake), nn::Binding::frozen);
        min_fake = *std::min_element(e.value().storage().begin(), e.value().storage().end());
    }
    const double m = 0.5 * min_fake;
    REQUIRE(m > 0.0);

    for (auto* p : model.disc_parameters()) p->zero_grad();
    Graph hinge;
    hinge.backward(gan::disc_loss(gan::energy(hinge, model, hinge.constant(x)),
                                  gan::energy(hinge, model, hinge.constant(fake)), m));
    const auto with_hinge = disc_grads(model);

    for (auto* p : model.disc_parameters()) p->zero_grad();
    Graph pure;
    pure.backward(ad::mean(gan::energy(pure, model, pure.constant(x))));
    const auto pure_grads = disc_grads(model);

    REQUIRE(with_hinge.size() == pure_grads.size());
    for (std::size_t i = 0; i < pure_grads.size(); ++i) CHECK(with_hinge[i] == pure_grads[i]);
}

TEST_CASE("margin_should_update examples") {
    CHECK(gan::margin_should_update(state(1.0, 80, 90, 85), 100));
    CHECK_FALSE(gan::margin_should_update(state(1.0, 80, 90, 95), 100));
    CHECK_FALSE(gan::margin_should_update(state(1.0, 90, 80, 70), 100));
    CHECK_THROWS_AS(gan::margin_should_update(state(1.0, 80, 90, 85), 0), std::invalid_argument);
}

TEST_CASE("margin_should_update truth table") {
    // Each condition is toggled independently: (a) S_data/N < m, (b) S_data < S_G,
    // (c) prev S_G <= S_G. N = 10.
    for (int mask = 0; mask < 8; ++mask) {
        const bool a = mask & 1, b = mask & 2, c = mask & 4;
        const double m = a ? 1.0 : 0.5;    // S_data / N = 0.8
        const double s_gen = b ? 9.0 : 7.0;
        const double prev = c ? s_gen : s_gen + 1.0;
        INFO("a=", a, " b=", b, " c=", c);
        CHECK(gan::margin_should_update(state(m, 8.0, s_gen, prev), 10) == (a && b && c));
    }
}

TEST_CASE("the infinite sentinel blocks the first epoch") {
    gan::MarginState ms;
    ms.margin = 1.0;
    ms.accumulate(0.1, 0.9, 1);
    CHECK(std::isinf(ms.prev_s_gen));
    CHECK_FALSE(gan::margin_should_update(ms, 1));
    CHECK_FALSE(gan::close_epoch(ms, 1, true));
    CHECK(ms.margin == 1.0);
    CHECK(ms.prev_s_gen == 0.9);
    CHECK(ms.s_data == 0.0);
    CHECK(ms.samples_seen == 0);
}

TEST_CASE("apply_margin_update examples") {
    gan::MarginState ms = state(1.0, 80, 90, 85);
    gan::apply_margin_update(ms, 100);
    CHECK(ms.margin == 0.8);
    CHECK(ms.prev_s_gen == 90);
    CHECK(ms.s_data == 0.0);
    CHECK(ms.s_gen == 0.0);

    // Two qualifying epochs: 1.0 -> 0.8 -> 0.6.
    gan::MarginState seq = state(1.0, 0, 0, 0);
    std::vector<double> margins{seq.margin};
    for (double mean : {0.8, 0.6}) {
        seq.accumulate(mean * 10, 9.0, 10);
        REQUIRE(gan::close_epoch(seq, 10, true));
        margins.push_back(seq.margin);
    }
    CHECK(margins == std::vector<double>{1.0, 0.8, 0.6});

    gan::MarginState bad = state(1.0, 80, 90, 95);
    CHECK_THROWS_AS(gan::apply_margin_update(bad, 100), std::logic_error);
    CHECK(bad.margin == 1.0);
}

TEST_CASE("close_epoch leaves the margin alone when not adaptive") {
    gan::MarginState ms = state(1.0, 80, 90, 85);
    CHECK_FALSE(gan::close_epoch(ms, 100, false));
    CHECK(ms.margin == 1.0);
    CHECK(ms.prev_s_gen == 90);
}

TEST_CASE("pretrain lowers the energy of a repeated point") {
    io::Dataset d;
    d.id = "single";
    d.dim = 2;
    for (int i = 0; i < 64; ++i) d.values.insert(d.values.end(), {1.5, -0.5});
    gan::GanModel model = gan::make_model(gan::Architecture{}, {}, 7);
    const double before = gan::mean_energy(model, d.points(), 16);
    io::Rng rng(1);
    const double m1 = gan::pretrain(model, d, 2, 16, rng);
    CHECK(m1 >= 0.0);
    CHECK(m1 < before);
}

TEST_CASE("pretrain with zero epochs returns the initial mean energy") {
    const io::Dataset d = io::make_dataset(io::DatasetId::ring8, 100, 0.1, 3);
    gan::GanModel model = gan::make_model(gan::Architecture{}, {}, 8);
    const gan::GanModel copy = model;
    io::Rng rng(2);
    const double m1 = gan::pretrain(model, d, 0, 10, rng);
    gan::GanModel fresh = copy;
    CHECK(m1 == gan::mean_energy(fresh, d.points(), 10));
    CHECK(model == copy);
    CHECK(rng.words_drawn() == 0);
}

TEST_CASE("train with zero epochs returns the pretrained model and an empty trace") {
    gan::TrainConfig c = small_config();
    c.max_epochs = 0;
    const gan::RunResult r = gan::train(c);
    CHECK(r.trace.epochs.empty());

    const io::Dataset d = io::make_dataset(c.dataset, c.train_size, c.sigma, gan::derive_seeds(c.seed).data);
    auto setup = gan::make_run_setup(c);
    const double m1 = gan::pretrain(setup.model, d, c.pretrain_epochs, c.batch_size, setup.rng);
    CHECK(r.model == setup.model);
    CHECK(r.trace.initial_margin == m1);
    CHECK(r.trace.final_margin == m1);
}

TEST_CASE("train is bit-deterministic under a fixed seed") {
    const gan::TrainConfig c = small_config();
    const gan::RunResult a = gan::train(c);
    const gan::RunResult b = gan::train(c);
    REQUIRE(a.trace.epochs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.trace.epochs[i].margin == b.trace.epochs[i].margin);
        CHECK(a.trace.epochs[i].e_real == b.trace.epochs[i].e_real);
        CHECK(a.trace.epochs[i].e_fake == b.trace.epochs[i].e_fake);
        CHECK(a.trace.epochs[i].batch_real_sums == b.trace.epochs[i].batch_real_sums);
    }
    CHECK(a.model == b.model);

    gan::TrainConfig other = c;
    other.seed = 1;
    CHECK_FALSE(gan::train(other).model == a.model);
}

TEST_CASE("ebgan mode keeps the margin fixed") {
    gan::TrainConfig c = small_config();
    c.mode = gan::TrainMode::ebgan;
    c.fixed_margin = 2.0;
    c.max_epochs = 4;
    const gan::RunResult r = gan::train(c);
    for (const auto& e : r.trace.epochs) {
        CHECK(e.margin == 2.0);
        CHECK_FALSE(e.margin_updated);
    }
    CHECK(r.trace.final_margin == 2.0);
}

TEST_CASE("each batch draws two independent latent batches") {
    const gan::TrainConfig c = small_config();
    const io::Dataset d = io::make_dataset(c.dataset, c.train_size, c.sigma, 1);
    auto setup = gan::make_run_setup(c);
    gan::MarginState ms;
    ms.margin = 0.5;
    const std::uint64_t before = setup.rng.normals_drawn();
    gan::train_epoch(setup.model, ms, d, c, setup.rng, 1);
    const std::size_t batches = c.train_size / c.batch_size;
    CHECK(setup.rng.normals_drawn() - before == batches * 2 * c.batch_size * c.arch.latent_dim);
}

TEST_CASE("accumulated energies equal the logged batch sums") {
    gan::TrainConfig c = small_config();
    c.train_size = 250;  // not a multiple of b: N_eff = 224
    const io::Dataset d = io::make_dataset(c.dataset, c.train_size, c.sigma, 1);
    auto setup = gan::make_run_setup(c);
    gan::MarginState ms;
    ms.margin = 10.0;  // high enough for the update to fire once the sentinel is gone
    ms.prev_s_gen = 0.0;
    const gan::EpochRecord rec = gan::train_epoch(setup.model, ms, d, c, setup.rng, 1);
    double real = 0.0, fake = 0.0;
    for (double v : rec.batch_real_sums) real += v;
    for (double v : rec.batch_fake_sums) fake += v;
    CHECK(rec.batch_real_sums.size() == 7);
    CHECK(rec.e_real == real / 224.0);
    CHECK(rec.e_fake == fake / 224.0);
    if (rec.margin_updated) CHECK(ms.margin == real / 224.0);
}

TEST_CASE("margin is non-increasing and energies finite over a magan run") {
    gan::TrainConfig c = small_config();
    c.max_epochs = 12;
    const gan::RunResult r = gan::train(c);
    double prev = r.trace.initial_margin;
    for (const auto& e : r.trace.epochs) {
        CHECK(e.margin <= prev);
        CHECK(std::isfinite(e.e_real));
        CHECK(std::isfinite(e.e_fake));
        CHECK(e.e_real >= 0.0);
        CHECK(e.e_fake >= 0.0);
        prev = e.margin;
    }
    CHECK(r.trace.final_margin <= prev);
}

TEST_CASE("non-finite energies abort training") {
    io::Dataset d;
    d.id = "huge";
    d.dim = 2;
    for (int i = 0; i < 64; ++i) d.values.insert(d.values.end(), {1e300, -1e300});
    gan::TrainConfig c = small_config();
    c.train_size = 64;
    CHECK_THROWS_AS(gan::train(c, d), gan::TrainingDiverged);
}

TEST_CASE("config validation names the key") {
    gan::TrainConfig c;
    c.batch_size = 0;
    try {
        c.validate();
        FAIL("expected InvalidConfig");
    } catch (const gan::InvalidConfig& e) {
        CHECK(e.key() == "b");
    }
    c = gan::TrainConfig{};
    c.batch_size = c.train_size + 1;
    CHECK_THROWS_AS(c.validate(), gan::InvalidConfig);
    c = gan::TrainConfig{};
    c.mode = gan::TrainMode::ebgan;
    CHECK_THROWS_AS(c.validate(), gan::InvalidConfig);
    c.fixed_margin = 10.0;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("model invariants and parameter balancing") {
    gan::Architecture arch;
    gan::GanModel m = gan::make_model(arch, {}, 0);
    CHECK(m.decoder.out_width() == m.encoder.in_width());
    CHECK(m.generator.out_width() == arch.data_dim);
    CHECK(m.generator.in_width() == m.latent_dim);
    CHECK_NOTHROW(m.validate());

    const std::size_t nz = gan::balanced_latent_dim(arch);
    const auto gen_params = [&](std::size_t k) {
        gan::Architecture a = arch;
        a.latent_dim = k;
        return gan::generator_spec(a);
    };
    const auto count = [](const nn::MlpSpec& s) {
        std::size_t n = 0;
        for (std::size_t i = 0; i + 1 < s.widths.size(); ++i) n += s.widths[i] * s.widths[i + 1] + s.widths[i + 1];
        return n;
    };
    const double disc = static_cast<double>(count(gan::encoder_spec(arch)) + count(gan::decoder_spec(arch)));
    const double best = std::abs(static_cast<double>(count(gen_params(nz))) - disc);
    CHECK(best <= std::abs(static_cast<double>(count(gen_params(nz + 1))) - disc));
    if (nz > 1) CHECK(best <= std::abs(static_cast<double>(count(gen_params(nz - 1))) - disc));
}

TEST_CASE("pearson correlation") {
    CHECK(gan::pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(gan::pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(gan::pearson({1, 2, 3}, {5, 5, 5}) == 0.0);
    CHECK_THROWS(gan::pearson({1}, {1}));
}
