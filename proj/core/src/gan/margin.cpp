#include "magan/gan/margin.hpp"

namespace magan::gan {

void MarginState::accumulate(double real_energy_sum, double fake_energy_sum, std::size_t batch) {
    s_data += real_energy_sum;
    s_gen += fake_energy_sum;
    samples_seen += batch;
}

bool margin_should_update(const MarginState& ms, std::size_t n_eff) {
    if (n_eff == 0) throw std::invalid_argument("margin_should_update: no samples accumulated this epoch");
    const double mean_real = ms.s_data / static_cast<double>(n_eff);
    return mean_real < ms.margin && ms.s_data < ms.s_gen && ms.prev_s_gen <= ms.s_gen;
}

void roll_epoch(MarginState& ms) {
    ms.prev_s_gen = ms.s_gen;
    ms.s_data = 0.0;
    ms.s_gen = 0.0;
    ms.samples_seen = 0;
}

void apply_margin_update(MarginState& ms, std::size_t n_eff) {
    if (!margin_should_update(ms, n_eff)) {
        throw std::logic_error("apply_margin_update: update conditions do not hold");
    }
    ms.margin = ms.s_data / static_cast<double>(n_eff);
    roll_epoch(ms);
}

bool close_epoch(MarginState& ms, std::size_t n_eff, bool adaptive) {
    if (adaptive && margin_should_update(ms, n_eff)) {
        apply_margin_update(ms, n_eff);
        return true;
    }
    roll_epoch(ms);
    return false;
}

}  // namespace magan::gan
