#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "magan/exact/simulate.hpp"
#include "magan/gan/trainer.hpp"

namespace magan::io {

/// Raised for unknown keys, unparseable values and invariant violations; the
/// message always names the key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument("config key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Parses flat `key = value` lines. `#` starts a comment; blank lines are
/// skipped. A later duplicate key overrides an earlier one.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Returns `base` with every entry of `overrides` applied on top.
KeyValues merge(KeyValues base, const KeyValues& overrides);

/// Training keys: alpha beta1 beta2 b n t_max pretrain_epochs seed mode margin
/// dataset sigma n_z code_dim hidden_width hidden_layers. Missing keys keep
/// their defaults (alpha 0.0005, beta1 0.5, b 64, pretrain_epochs 2, ...).
gan::TrainConfig make_train_config(const KeyValues& values);
gan::TrainConfig parse_train_config(const KeyValues& file, const KeyValues& flags);

struct SimConfig {
    exact::SimMode mode = exact::SimMode::magan;
    std::size_t support_size = 16;
    double margin = 1.0;
    double eta = 1e-3;
    std::size_t max_steps = 100000;
    double tolerance = 1e-6;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Simulation keys: mode k margin eta max_steps tol seed.
SimConfig make_sim_config(const KeyValues& values);
SimConfig parse_sim_config(const KeyValues& file, const KeyValues& flags);

/// Flat key=value rendering of a config, in the same key vocabulary.
std::string to_key_values(const gan::TrainConfig& config);
std::string to_key_values(const SimConfig& config);

}  // namespace magan::io
