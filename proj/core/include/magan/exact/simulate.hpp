#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "magan/exact/discrete.hpp"

namespace magan::exact {

enum class SimMode { magan, ebgan };

std::string to_string(SimMode mode);
SimMode parse_sim_mode(const std::string& name);

struct SimStep {
    std::size_t step = 0;        // 1-based
    double margin = 0.0;         // margin used for this step's discriminator
    double e_data = 0.0;         // E_data(D*) after the generator step
    double e_gen = 0.0;          // E_gen(D*) after the generator step
    double tv = 0.0;             // TV distance after the generator step
    bool margin_updated = false;
    double next_margin = 0.0;
};

struct SimTrace {
    std::vector<SimStep> steps;
    DiscreteDistPair final_pair;
    double initial_tv = 0.0;
    bool converged = false;      // TV fell below the tolerance
};

struct SimOptions {
    double eta = 1e-3;
    std::size_t max_steps = 100000;
    double tolerance = 1e-6;
    bool record_steps = true;
};

/// Idealized training on a finite support. Every step rebuilds the optimal
/// discriminator, moves p_gen by one projected gradient step and recomputes
/// the exact expectations. In magan mode the margin is then replaced by
/// E_data when E_data < m, E_data < E_gen and E_gen did not decrease relative
/// to the previous step. Stops once TV < tolerance or after max_steps.
SimTrace simulate(SimMode mode, DiscreteDistPair start, const SimOptions& options);

}  // namespace magan::exact
