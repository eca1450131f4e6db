#include "magan/exact/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace magan::exact {

namespace {

void validate_distribution(std::span<const double> p, const char* name) {
    if (p.empty()) throw std::invalid_argument(std::string(name) + " is empty");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " has a negative or non-finite entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument(std::string(name) + " sums to " + std::to_string(total) + ", not 1");
    }
}

}  // namespace

void DiscreteDistPair::validate() const {
    validate_distribution(p_data, "p_data");
    validate_distribution(p_gen, "p_gen");
    if (p_data.size() != p_gen.size()) throw std::invalid_argument("p_data and p_gen differ in length");
    if (!(margin > 0.0) || !std::isfinite(margin)) throw std::invalid_argument("margin must be positive");
}

std::vector<double> optimal_discriminator(const DiscreteDistPair& pair) {
    std::vector<double> d(pair.p_data.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (pair.p_data[i] < pair.p_gen[i]) d[i] = pair.margin;
    }
    return d;
}

double expected_energy(std::span<const double> p, std::span<const double> energies) {
    if (p.size() != energies.size()) {
        throw std::invalid_argument("expected_energy: length mismatch (" + std::to_string(p.size()) + " vs " +
                                    std::to_string(energies.size()) + ")");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e += p[i] * energies[i];
    return e;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

double tv_distance(const DiscreteDistPair& pair) { return tv_distance(pair.p_gen, pair.p_data); }

double mass_on_overrepresented(const DiscreteDistPair& pair, std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (pair.p_data[i] < pair.p_gen[i]) s += p[i];
    }
    return s;
}

EnergyOrderingReport check_energy_ordering(const DiscreteDistPair& pair, double tol) {
    const auto d = optimal_discriminator(pair);
    EnergyOrderingReport r;
    r.e_data = expected_energy(pair.p_data, d);
    r.e_gen = expected_energy(pair.p_gen, d);
    r.ordering = r.e_data <= r.e_gen + tol && r.e_gen <= pair.margin + tol;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) max_gap = std::max(max_gap, std::abs(pair.p_data[i] - pair.p_gen[i]));
    const bool energies_equal = std::abs(r.e_gen - r.e_data) <= tol;
    const bool distributions_equal = max_gap <= tol;
    r.equality_iff = energies_equal == distributions_equal;
    return r;
}

IdentityReport tv_identity(const DiscreteDistPair& pair) {
    const auto d = optimal_discriminator(pair);
    IdentityReport r;
    r.lhs = expected_energy(pair.p_gen, d) - expected_energy(pair.p_data, d);
    double l1 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) l1 += std::abs(pair.p_gen[i] - pair.p_data[i]);
    r.rhs = 0.5 * pair.margin * l1;
    r.abs_diff = std::abs(r.lhs - r.rhs);
    return r;
}

RecurrenceResult margin_recurrence(const DiscreteDistPair& pair, double m_prev) {
    if (!(m_prev >= 0.0) || !std::isfinite(m_prev)) throw std::invalid_argument("margin_recurrence: m_prev must be >= 0");
    DiscreteDistPair at_prev = pair;
    at_prev.margin = m_prev;
    RecurrenceResult r;
    bool s1_empty = true;
    double data_mass = 0.0;
    for (std::size_t i = 0; i < pair.p_data.size(); ++i) {
        if (pair.p_data[i] < pair.p_gen[i]) {
            s1_empty = false;
            data_mass += pair.p_data[i];
        }
    }
    r.m_next = m_prev * data_mass;
    r.e_data = expected_energy(pair.p_data, optimal_discriminator(at_prev));
    r.converged = s1_empty;
    return r;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("project_to_simplex: empty vector");
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, tau = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) tau = candidate;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
    return out;
}

std::vector<double> generator_displacement(const DiscreteDistPair& pair, double eta) {
    auto d = optimal_discriminator(pair);
    for (auto& v : d) v = -eta * v;
    return d;
}

std::vector<double> idealized_generator_step(const DiscreteDistPair& pair, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("idealized_generator_step: eta must be positive");
    const auto delta = generator_displacement(pair, eta);
    if (std::all_of(delta.begin(), delta.end(), [](double d) { return d == 0.0; })) return pair.p_gen;
    std::vector<double> moved(pair.p_gen.size());
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = pair.p_gen[i] + delta[i];
    return project_to_simplex(moved);
}

std::vector<double> random_distribution(io::Rng& rng, std::size_t k) {
    if (k == 0) throw std::invalid_argument("random_distribution: k must be positive");
    std::vector<double> p(k);
    for (auto& v : p) v = -std::log1p(-rng.uniform());
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    return p;
}

DiscreteDistPair random_pair(io::Rng& rng, std::size_t k, double margin) {
    DiscreteDistPair pair;
    pair.p_data = random_distribution(rng, k);
    pair.p_gen = random_distribution(rng, k);
    pair.margin = margin;
    return pair;
}

}  // namespace magan::exact
