#include "magan/exact/simulate.hpp"

#include <limits>
#include <stdexcept>

namespace magan::exact {

std::string to_string(SimMode mode) { return mode == SimMode::magan ? "magan" : "ebgan"; }

SimMode parse_sim_mode(const std::string& name) {
    if (name == "magan") return SimMode::magan;
    if (name == "ebgan") return SimMode::ebgan;
    throw std::invalid_argument("mode: expected magan or ebgan, got '" + name + "'");
}

SimTrace simulate(SimMode mode, DiscreteDistPair pair, const SimOptions& options) {
    pair.validate();
    if (!(options.eta > 0.0)) throw std::invalid_argument("simulate: eta must be positive");
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("simulate: tolerance must be positive");

    SimTrace trace;
    trace.initial_tv = tv_distance(pair);
    double prev_e_gen = std::numeric_limits<double>::infinity();
    double tv = trace.initial_tv;

    for (std::size_t t = 1; t <= options.max_steps && tv >= options.tolerance; ++t) {
        pair.p_gen = idealized_generator_step(pair, options.eta);

        const auto d = optimal_discriminator(pair);
        SimStep s;
        s.step = t;
        s.margin = pair.margin;
        s.e_data = expected_energy(pair.p_data, d);
        s.e_gen = expected_energy(pair.p_gen, d);
        tv = tv_distance(pair);
        s.tv = tv;

        if (mode == SimMode::magan && s.e_data < pair.margin && s.e_data < s.e_gen && prev_e_gen <= s.e_gen) {
            pair.margin = s.e_data;
            s.margin_updated = true;
        }
        s.next_margin = pair.margin;
        prev_e_gen = s.e_gen;
        if (options.record_steps) trace.steps.push_back(s);
    }
    trace.converged = tv < options.tolerance;
    trace.final_pair = std::move(pair);
    return trace;
}

}  // namespace magan::exact
