#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "magan/io/rng.hpp"

namespace magan::exact {

/// Two probability vectors over a shared finite support plus a margin m > 0.
struct DiscreteDistPair {
    std::vector<double> p_data;
    std::vector<double> p_gen;
    double margin = 1.0;

    std::size_t support_size() const { return p_data.size(); }
    /// Throws std::invalid_argument unless both vectors are nonnegative, equal
    /// length >= 1, sum to 1 within 1e-12, and margin > 0.
    void validate() const;
};

/// Optimal energy assignment for a fixed generator: m where p_data < p_gen
/// (the over-represented set S1), 0 elsewhere. Ties get 0.
std::vector<double> optimal_discriminator(const DiscreteDistPair& pair);

/// sum_i p[i] * energies[i].
double expected_energy(std::span<const double> p, std::span<const double> energies);

/// Half the L1 distance between the two distributions, in [0, 1].
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const DiscreteDistPair& pair);

/// Probability mass p assigns to S1 = {i : p_data[i] < p_gen[i]}.
double mass_on_overrepresented(const DiscreteDistPair& pair, std::span<const double> p);

struct EnergyOrderingReport {
    double e_data = 0.0;
    double e_gen = 0.0;
    bool ordering = false;       // e_data <= e_gen <= m (within tol)
    bool equality_iff = false;   // (e_data == e_gen) <=> (p_data == p_gen), both within tol
    bool holds() const { return ordering && equality_iff; }
};

EnergyOrderingReport check_energy_ordering(const DiscreteDistPair& pair, double tol = 1e-12);

struct IdentityReport {
    double lhs = 0.0;  // E_gen(D*) - E_data(D*)
    double rhs = 0.0;  // (m / 2) * sum |p_gen - p_data|
    double abs_diff = 0.0;
};

IdentityReport tv_identity(const DiscreteDistPair& pair);

struct RecurrenceResult {
    double m_next = 0.0;        // m_prev * p_data(S1)
    double e_data = 0.0;        // E_data(D*) evaluated independently with margin m_prev
    bool converged = false;     // S1 is empty: the distributions already match
};

/// One adaptive-margin update under the optimal discriminator built with
/// margin m_prev.
RecurrenceResult margin_recurrence(const DiscreteDistPair& pair, double m_prev);

/// Euclidean projection of v onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

/// Displacement of p_gen before projection: -eta * D*, i.e. -eta*m on S1 and 0 on S2.
std::vector<double> generator_displacement(const DiscreteDistPair& pair, double eta);

/// p_gen <- project_to_simplex(p_gen - eta * D*). Requires eta > 0.
std::vector<double> idealized_generator_step(const DiscreteDistPair& pair, double eta);

/// Random distribution on K points: normalized Exp(1) variates (flat Dirichlet).
std::vector<double> random_distribution(io::Rng& rng, std::size_t k);
DiscreteDistPair random_pair(io::Rng& rng, std::size_t k, double margin);

}  // namespace magan::exact
