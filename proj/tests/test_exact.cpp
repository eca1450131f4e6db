#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magan/exact/discrete.hpp"
#include "magan/exact/simulate.hpp"
#include "magan/exact/verify.hpp"

using namespace magan;
using exact::DiscreteDistPair;

namespace {

DiscreteDistPair running_pair() { return {{0.3, 0.7}, {0.6, 0.4}, 1.0}; }

// Simplex projection by bisection on the threshold tau with sum(max(v - tau, 0)) = 1.
std::vector<double> bisect_projection(const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end()) - 1.0;
    double hi = *std::max_element(v.begin(), v.end());
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        double s = 0.0;
        for (double x : v) s += std::max(x - mid, 0.0);
        (s > 1.0 ? lo : hi) = mid;
    }
    std::vector<double> out;
    for (double x : v) out.push_back(std::max(x - 0.5 * (lo + hi), 0.0));
    return out;
}

double sum_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

TEST_CASE("optimal_discriminator examples") {
    CHECK(exact::optimal_discriminator(running_pair()) == std::vector<double>{1.0, 0.0});
    CHECK(exact::optimal_discriminator({{0.5, 0.5}, {0.5, 0.5}, 3.0}) == std::vector<double>{0.0, 0.0});
    CHECK(exact::optimal_discriminator({{0.2, 0.3, 0.5}, {0.5, 0.3, 0.2}, 2.0}) == std::vector<double>{2.0, 0.0, 0.0});
}

TEST_CASE("invalid pairs are rejected") {
    CHECK_THROWS(DiscreteDistPair({{0.5, 0.6}, {0.5, 0.5}, 1.0}).validate());
    CHECK_THROWS(DiscreteDistPair({{1.0}, {0.5, 0.5}, 1.0}).validate());
    CHECK_THROWS(DiscreteDistPair({{1.0}, {1.0}, 0.0}).validate());
    CHECK_THROWS(DiscreteDistPair({{-0.5, 1.5}, {0.5, 0.5}, 1.0}).validate());
    CHECK_NOTHROW(DiscreteDistPair({{1.0}, {1.0}, 1.0}).validate());
}

TEST_CASE("expected_energy examples") {
    const std::vector<double> d{1.0, 0.0};
    CHECK(exact::expected_energy(std::vector<double>{0.3, 0.7}, d) == 0.3);
    CHECK(exact::expected_energy(std::vector<double>{0.6, 0.4}, d) == 0.6);
    CHECK(exact::expected_energy(std::vector<double>{0.1, 0.9}, std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK_THROWS(exact::expected_energy(std::vector<double>{1.0}, d));
}

TEST_CASE("tv_distance examples") {
    CHECK(exact::tv_distance(std::vector<double>{0.2, 0.8}, std::vector<double>{0.2, 0.8}) == 0.0);
    CHECK(exact::tv_distance(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == 1.0);
    CHECK(exact::tv_distance(running_pair()) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("energy ordering examples") {
    const auto r = exact::check_energy_ordering(running_pair());
    CHECK(r.e_data == 0.3);
    CHECK(r.e_gen == 0.6);
    CHECK(r.holds());
    const auto same = exact::check_energy_ordering({{0.25, 0.75}, {0.25, 0.75}, 4.0});
    CHECK(same.e_data == 0.0);
    CHECK(same.e_gen == 0.0);
    CHECK(same.holds());
}

TEST_CASE("TV identity examples") {
    const auto r = exact::tv_identity(running_pair());
    CHECK(r.lhs == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.rhs == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.abs_diff < 1e-15);
    const auto same = exact::tv_identity({{0.4, 0.6}, {0.4, 0.6}, 2.0});
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);
}

TEST_CASE("margin recurrence examples") {
    const auto r = exact::margin_recurrence(running_pair(), 1.0);
    CHECK(r.m_next == 0.3);
    CHECK(r.m_next == r.e_data);
    CHECK_FALSE(r.converged);

    // With the pair held fixed the margin decays geometrically, m_t = 0.3^t.
    double m = 1.0;
    for (int t = 1; t <= 10; ++t) {
        m = exact::margin_recurrence(running_pair(), m).m_next;
        CHECK(m == doctest::Approx(std::pow(0.3, t)).epsilon(1e-14));
    }

    const auto same = exact::margin_recurrence({{0.5, 0.5}, {0.5, 0.5}, 1.0}, 1.0);
    CHECK(same.converged);
    CHECK(same.m_next == 0.0);
}

TEST_CASE("randomized identities hold to machine precision") {
    io::Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 2 + rng.uniform_index(63);
        const double m = 10.0 * (1.0 - rng.uniform());
        const DiscreteDistPair pair = exact::random_pair(rng, k, m);
        INFO("trial ", trial, " k=", k);

        const auto ord = exact::check_energy_ordering(pair);
        REQUIRE(ord.holds());
        REQUIRE(ord.e_gen - ord.e_data >= -1e-12);

        // The identity is checked against a hand-written sum, not the library's TV.
        const double rhs = 0.5 * m * sum_abs_diff(pair.p_data, pair.p_gen);
        REQUIRE(std::abs((ord.e_gen - ord.e_data) - rhs) < 1e-12);

        const auto rec = exact::margin_recurrence(pair, m);
        double p_s1 = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            if (pair.p_data[i] < pair.p_gen[i]) p_s1 += pair.p_data[i];
        REQUIRE(std::abs(rec.m_next - m * p_s1) < 1e-12);
        if (exact::tv_distance(pair) > 1e-12) REQUIRE(rec.m_next < m);

        // Re-optimizing the discriminator for the same generator leaves E_gen unchanged.
        const auto d1 = exact::optimal_discriminator(pair);
        const auto d2 = exact::optimal_discriminator(pair);
        REQUIRE(exact::expected_energy(pair.p_gen, d1) == exact::expected_energy(pair.p_gen, d2));
    }
}

TEST_CASE("generator step examples") {
    const DiscreteDistPair matched{{0.1, 0.2, 0.7}, {0.1, 0.2, 0.7}, 1.0};
    CHECK(exact::idealized_generator_step(matched, 0.1) == matched.p_gen);

    const auto next = exact::idealized_generator_step(running_pair(), 1e-3);
    CHECK(next[0] < 0.6);
    CHECK(next[1] > 0.4);

    const auto full = exact::generator_displacement(running_pair(), 0.25);
    DiscreteDistPair half = running_pair();
    half.margin = 0.5;
    const auto halved = exact::generator_displacement(half, 0.25);
    CHECK(full == std::vector<double>{-0.25, 0.0});
    CHECK(halved[0] == full[0] / 2.0);
    CHECK(halved[1] == 0.0);

    CHECK_THROWS(exact::idealized_generator_step(running_pair(), 0.0));
}

TEST_CASE("simplex projection matches a bisection oracle") {
    CHECK(exact::project_to_simplex(std::vector<double>{0.2, 0.8}) == std::vector<double>{0.2, 0.8});
    CHECK(exact::project_to_simplex(std::vector<double>{2.0, 0.0}) == std::vector<double>{1.0, 0.0});
    io::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + rng.uniform_index(20));
        for (auto& x : v) x = 2.0 * rng.normal();
        const auto p = exact::project_to_simplex(v);
        const auto oracle = bisect_projection(v);
        REQUIRE(p.size() == v.size());
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= 0.0);
            CHECK(std::abs(p[i] - oracle[i]) < 1e-9);
        }
    }
}

TEST_CASE("fixed-margin dynamics converge on a two-point support") {
    exact::SimOptions opt;
    opt.eta = 0.1;
    const auto trace = exact::simulate(exact::SimMode::ebgan, running_pair(), opt);
    CHECK(trace.converged);
    CHECK(trace.initial_tv == doctest::Approx(0.3));
    double prev = trace.initial_tv;
    for (const auto& s : trace.steps) {
        CHECK(s.tv <= prev);
        CHECK(s.margin == 1.0);
        CHECK_FALSE(s.margin_updated);
        prev = s.tv;
    }
}

TEST_CASE("fixed-margin TV is non-increasing until the over-represented set first changes") {
    io::Rng rng(11);
    exact::SimOptions opt;
    opt.eta = 1e-4;
    opt.max_steps = 20000;
    for (int trial = 0; trial < 20; ++trial) {
        const DiscreteDistPair start = exact::random_pair(rng, 16, 1.0);
        DiscreteDistPair pair = start;
        auto s1 = exact::optimal_discriminator(pair);
        double prev = exact::tv_distance(pair);
        for (std::size_t t = 0; t < opt.max_steps; ++t) {
            pair.p_gen = exact::idealized_generator_step(pair, opt.eta);
            if (exact::optimal_discriminator(pair) != s1) break;
            const double tv = exact::tv_distance(pair);
            REQUIRE(tv <= prev + 1e-15);
            prev = tv;
        }
    }
}

TEST_CASE("an oversized step triggers a margin update and the margin never increases") {
    io::Rng rng(3);
    exact::SimOptions opt;
    opt.eta = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto trace = exact::simulate(exact::SimMode::magan, exact::random_pair(rng, 16, 1.0), opt);
        bool fired = false;
        double prev = 1.0;
        for (const auto& s : trace.steps) {
            fired = fired || s.margin_updated;
            CHECK(s.margin <= prev);
            CHECK(s.next_margin <= s.margin);
            CHECK(s.tv >= 0.0);
            CHECK(s.tv <= 1.0);
            if (s.margin_updated) CHECK(s.next_margin == s.e_data);
            prev = s.next_margin;
        }
        CHECK(fired);
        CHECK(trace.converged);
    }
}

TEST_CASE("simulate rejects bad options and parses modes") {
    exact::SimOptions opt;
    opt.eta = -1.0;
    CHECK_THROWS(exact::simulate(exact::SimMode::magan, running_pair(), opt));
    CHECK(exact::parse_sim_mode("ebgan") == exact::SimMode::ebgan);
    CHECK(exact::to_string(exact::SimMode::magan) == "magan");
    CHECK_THROWS(exact::parse_sim_mode("wgan"));
}

TEST_CASE("theory suite passes and is deterministic") {
    exact::VerifyOptions opt;
    opt.trials = 200;
    opt.convergence = false;
    const auto a = exact::run_theory_suite(opt);
    const auto b = exact::run_theory_suite(opt);
    CHECK(exact::all_passed(a));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].worst == b[i].worst);
    }
}
