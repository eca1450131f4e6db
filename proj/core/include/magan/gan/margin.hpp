#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>

namespace magan::gan {

/// Margin controller state for adaptive-margin training.
///
/// `s_data` and `s_gen` accumulate per-sample real and synthetic energies over
/// the current epoch; `prev_s_gen` holds the previous epoch's `s_gen` and
/// starts at +infinity so the first epoch can never trigger an update.
struct MarginState {
    double margin = 0.0;
    double s_data = 0.0;
    double s_gen = 0.0;
    double prev_s_gen = std::numeric_limits<double>::infinity();
    std::size_t samples_seen = 0;

    void accumulate(double real_energy_sum, double fake_energy_sum, std::size_t batch);
};

/// True iff S_data/N < m, S_data < S_G and S_G(previous epoch) <= S_G.
/// Throws std::invalid_argument when n_eff == 0.
bool margin_should_update(const MarginState& ms, std::size_t n_eff);

/// m <- S_data / n_eff, then closes the epoch (prev_s_gen <- s_gen, accumulators
/// reset). Throws std::logic_error if the update conditions do not hold.
void apply_margin_update(MarginState& ms, std::size_t n_eff);

/// Closes the epoch without touching the margin.
void roll_epoch(MarginState& ms);

/// End-of-epoch step: applies the update when `adaptive` and the conditions
/// hold, otherwise only rolls the epoch. Returns whether the margin changed.
bool close_epoch(MarginState& ms, std::size_t n_eff, bool adaptive);

}  // namespace magan::gan
