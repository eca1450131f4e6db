#include <doctest.h>

#include <cmath>
#include <cstring>

#include "magan/autodiff/gradcheck.hpp"
#include "magan/autodiff/ops.hpp"
#include "magan/io/rng.hpp"
#include "magan/nn/adamax.hpp"
#include "magan/nn/mlp.hpp"

using namespace magan;
using ad::Parameter;
using ad::Tensor;

namespace {

std::vector<double> flat(nn::Mlp& m) {
    std::vector<double> out;
    for (auto* p : m.parameters()) out.insert(out.end(), p->value.storage().begin(), p->value.storage().end());
    return out;
}

void set_grad(Parameter& p, std::initializer_list<double> g) { p.grad = Tensor({g.size()}, std::vector<double>(g)); }

}  // namespace

TEST_CASE("init_mlp is deterministic under its seed") {
    const nn::MlpSpec spec{{2, 4, 2}};
    nn::Mlp a = nn::init_mlp(spec, 7);
    nn::Mlp b = nn::init_mlp(spec, 7);
    const auto fa = flat(a), fb = flat(b);
    REQUIRE(fa.size() == fb.size());
    CHECK(std::memcmp(fa.data(), fb.data(), fa.size() * sizeof(double)) == 0);
    nn::Mlp c = nn::init_mlp(spec, 8);
    CHECK(flat(c) != fa);
}

TEST_CASE("init_mlp zero biases and Glorot range") {
    const nn::MlpSpec spec{{3, 5, 4, 2}};
    nn::Mlp m = nn::init_mlp(spec, 1);
    REQUIRE(m.layers().size() == 3);
    for (const auto& layer : m.layers()) {
        for (double b : layer.bias.value.storage()) CHECK(b == 0.0);
        const double in = static_cast<double>(layer.weights.value.rows());
        const double out = static_cast<double>(layer.weights.value.cols());
        const double bound = std::sqrt(6.0 / (in + out));
        for (double w : layer.weights.value.storage()) CHECK(std::abs(w) <= bound);
    }
    CHECK(m.parameter_count() == (3 * 5 + 5) + (5 * 4 + 4) + (4 * 2 + 2));
}

TEST_CASE("init_mlp weight mean over a million draws is near zero") {
    // 62 layers of 128 x 128 weights, each U(-a, a) with a = sqrt(6 / 256); the
    // sample mean of 1015808 draws has std a / sqrt(3 * 1015808) ~ 9e-5.
    std::vector<std::size_t> widths(63, 128);
    nn::Mlp m = nn::init_mlp(nn::MlpSpec{widths}, 3);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& layer : m.layers()) {
        for (double w : layer.weights.value.storage()) sum += w;
        n += layer.weights.value.size();
    }
    REQUIRE(n >= 1000000);
    CHECK(std::abs(sum / static_cast<double>(n)) < 0.005);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS(nn::init_mlp(nn::MlpSpec{{2}}, 0));
    CHECK_THROWS(nn::init_mlp(nn::MlpSpec{{2, 0, 1}}, 0));
    CHECK_THROWS(nn::init_mlp(nn::MlpSpec{{2, 3}, nn::Activation::leaky_relu(1.5)}, 0));
}

TEST_CASE("forward_mlp examples") {
    SUBCASE("zero parameters with sigmoid output give 0.5") {
        nn::MlpSpec spec{{3, 4, 2}, nn::Activation::relu(), nn::Activation::sigmoid()};
        nn::Mlp m = nn::init_mlp(spec, 0);
        for (auto* p : m.parameters()) p->value.fill(0.0);
        ad::Graph g;
        const auto y = nn::forward_mlp(g, m, g.constant(Tensor::filled({5, 3}, 1.7)));
        CHECK(y.value() == Tensor::filled({5, 2}, 0.5));
    }
    SUBCASE("identity single layer passes input through") {
        nn::MlpSpec spec{{2, 2}};
        nn::Mlp m = nn::init_mlp(spec, 0);
        m.layers()[0].weights.value = Tensor::matrix({{1, 0}, {0, 1}});
        ad::Graph g;
        const Tensor x = Tensor::matrix({{1.5, -2}, {3, 4}});
        CHECK(nn::forward_mlp(g, m, g.constant(x)).value() == x);
    }
    SUBCASE("wrong input width") {
        nn::Mlp m = nn::init_mlp(nn::MlpSpec{{2, 3}}, 0);
        ad::Graph g;
        CHECK_THROWS_AS(nn::forward_mlp(g, m, g.constant(Tensor({4, 3}))), ad::DimensionError);
    }
}

TEST_CASE("forward_mlp gradient passes gradcheck") {
    nn::Mlp m = nn::init_mlp(nn::MlpSpec{{3, 6, 2}, nn::Activation::tanh(), nn::Activation::sigmoid()}, 9);
    io::Rng rng(4);
    Tensor x({5, 3});
    for (auto& v : x.storage()) v = rng.normal();
    const ad::LossBuilder loss = [&](ad::Graph& g) { return ad::mean(ad::square(nn::forward_mlp(g, m, g.constant(x)))); };
    const auto params = m.parameters();
    CHECK(ad::gradcheck(loss, params).max_rel_error < 1e-5);
}

TEST_CASE("frozen binding produces no parameter gradients") {
    nn::Mlp m = nn::init_mlp(nn::MlpSpec{{2, 3, 1}}, 2);
    m.zero_grad();
    ad::Graph g;
    Parameter x("x", Tensor::matrix({{1, 2}}));
    x.zero_grad();
    g.backward(ad::sum(nn::forward_mlp(g, m, g.parameter(x), nn::Binding::frozen)));
    for (auto* p : m.parameters()) {
        for (double v : p->grad.storage()) CHECK(v == 0.0);
    }
    bool any = false;
    for (double v : x.grad.storage()) any = any || v != 0.0;
    CHECK(any);
}

TEST_CASE("adamax: zero gradient leaves parameters unchanged") {
    Parameter p("p", Tensor::vector({0.3, -0.2}));
    set_grad(p, {0.0, 0.0});
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&p};
    s.step(ps);
    CHECK(p.value == Tensor::vector({0.3, -0.2}));
    CHECK(s.step_count() == 1);
}

TEST_CASE("adamax: hand-evaluated recurrence") {
    // Oracle, evaluated by hand for g = 0.1, alpha 5e-4, beta1 0.5, beta2 0.999:
    //   t=1: mu = 0.05,   u = 0.1, step = 5e-4 / 0.5  * 0.05  / 0.1 = 5e-4
    //   t=2: mu = 0.075,  u = max(0.0999, 0.1) = 0.1,
    //        step = 5e-4 / 0.75 * 0.075 / 0.1 = 5e-4
    Parameter p("p", Tensor::vector({1.0}));
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&p};

    set_grad(p, {0.1});
    s.step(ps);
    CHECK(s.first_moment()[0][0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(s.inf_norm()[0][0] == 0.1);
    const double after1 = p.value[0];
    CHECK(std::abs((1.0 - after1) - 0.0005) < 1e-15);

    set_grad(p, {0.1});
    s.step(ps);
    const double mu2 = 0.5 * 0.05 + 0.5 * 0.1;
    const double u2 = std::max(0.999 * 0.1, 0.1);
    const double delta2 = 0.0005 / (1.0 - 0.25) * mu2 / u2;
    CHECK(std::abs((after1 - p.value[0]) - delta2) < 1e-15);
    CHECK(after1 - p.value[0] > 0.0);
    CHECK(s.step_count() == 2);
}

TEST_CASE("adamax: non-finite gradient is refused without mutation") {
    Parameter a("a", Tensor::vector({1.0}));
    Parameter b("b", Tensor::vector({2.0}));
    set_grad(a, {0.5});
    set_grad(b, {std::nan("")});
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&a, &b};
    CHECK_THROWS_AS(s.step(ps), nn::NonFiniteGradient);
    CHECK(a.value[0] == 1.0);
    CHECK(s.step_count() == 0);
}

TEST_CASE("adamax: invalid hyper-parameters") {
    CHECK_THROWS(nn::AdamaxState(nn::AdamaxConfig{-1.0, 0.5, 0.999}));
    CHECK_THROWS(nn::AdamaxState(nn::AdamaxConfig{0.1, 1.0, 0.999}));
    CHECK_THROWS(nn::AdamaxState(nn::AdamaxConfig{0.1, 0.5, 1.5}));
}

TEST_CASE("adamax: update magnitude stays within alpha / (1 - beta1^t)") {
    // The bound holds with equality for constant gradients; random streams stay
    // inside it up to rounding.
    io::Rng rng(12);
    Parameter p("p", Tensor({16}));
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&p};
    double worst = 0.0;
    for (int t = 1; t <= 500; ++t) {
        p.grad = Tensor({16});
        for (auto& g : p.grad.storage()) g = rng.normal() * std::exp(rng.normal());
        const Tensor before = p.value;
        s.step(ps);
        const double bound = 0.0005 / (1.0 - std::pow(0.5, t));
        for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(p.value[i] - before[i]) / bound);
    }
    CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("adamax: slowly shrinking gradients exceed alpha / (1 - beta1^t) by at most (1 - beta1) / (1 - beta1/beta2)") {
    // g_j = beta2^(j - T) keeps u_T = 1 while every past gradient sits at the
    // largest value u allows, which maximizes |mu| / u.
    const int T = 200;
    Parameter p("p", Tensor({1}));
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&p};
    double ratio = 0.0;
    for (int j = 1; j <= T; ++j) {
        set_grad(p, {std::pow(0.999, j - T)});
        const double before = p.value[0];
        s.step(ps);
        ratio = std::abs(p.value[0] - before) / (0.0005 / (1.0 - std::pow(0.5, j)));
    }
    const double r = 0.5 / 0.999;
    const double exact = 0.5 * (1.0 - std::pow(r, T)) / (1.0 - r) / (1.0 - std::pow(0.5, T));
    CHECK(ratio > 1.0);
    CHECK(ratio == doctest::Approx(exact).epsilon(1e-12));
    CHECK(ratio < 1.0011);
}

TEST_CASE("adamax: copied state replays bit-identically") {
    io::Rng rng(6);
    Parameter p("p", Tensor({4}));
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&p};
    for (int t = 0; t < 5; ++t) {
        p.grad = Tensor({4});
        for (auto& g : p.grad.storage()) g = rng.normal();
        s.step(ps);
    }
    Parameter q = p;
    nn::AdamaxState copy = s;
    std::vector<Parameter*> qs{&q};
    for (int t = 0; t < 20; ++t) {
        Tensor g({4});
        for (auto& v : g.storage()) v = rng.normal();
        p.grad = g;
        q.grad = g;
        s.step(ps);
        copy.step(qs);
    }
    CHECK(p.value == q.value);
    CHECK(s == copy);
}

TEST_CASE("adamax descends the quadratic monotonically after the first step") {
    io::Rng rng(1);
    Parameter w("w", Tensor({8}));
    for (auto& v : w.value.storage()) v = rng.normal();
    nn::AdamaxState s;
    std::vector<Parameter*> ps{&w};
    auto f = [&] {
        double acc = 0.0;
        for (double v : w.value.storage()) acc += 0.5 * v * v;
        return acc;
    };
    double prev = f();
    bool monotone = true;
    for (int t = 1; t <= 1000; ++t) {
        w.grad = w.value;  // gradient of 0.5 |w|^2
        s.step(ps);
        const double now = f();
        if (t > 1 && !(now < prev)) monotone = false;
        prev = now;
    }
    CHECK(monotone);
}
