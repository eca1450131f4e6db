#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "magan/gan/margin.hpp"
#include "magan/gan/model.hpp"
#include "magan/io/dataset.hpp"
#include "magan/io/rng.hpp"

namespace magan::gan {

enum class TrainMode { magan, ebgan };

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& name);

/// Violated TrainConfig invariant; `key()` is the config key at fault.
class InvalidConfig : public std::invalid_argument {
public:
    InvalidConfig(std::string key, std::string reason)
        : std::invalid_argument("invalid config value for '" + key + "': " + reason),
          key_(std::move(key)),
          reason_(std::move(reason)) {}
    const std::string& key() const { return key_; }
    const std::string& reason() const { return reason_; }

private:
    std::string key_;
    std::string reason_;
};

struct TrainConfig {
    nn::AdamaxConfig optimizer;          // alpha 0.0005, beta1 0.5, beta2 0.999
    std::size_t batch_size = 64;
    std::size_t train_size = 8192;       // N
    std::size_t max_epochs = 200;        // T_max
    std::size_t pretrain_epochs = 2;
    std::uint64_t seed = 0;
    TrainMode mode = TrainMode::magan;
    std::optional<double> fixed_margin;  // required in ebgan mode
    io::DatasetId dataset = io::DatasetId::ring8;
    double sigma = 0.1;
    Architecture arch;

    /// Throws InvalidConfig naming the offending key.
    void validate() const;
};

/// Raised when a loss or energy turns non-finite; training is aborted.
class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EpochRecord {
    std::size_t epoch = 0;       // 1-based
    double margin = 0.0;         // margin in effect during the epoch
    double e_real = 0.0;         // S_data / N_eff
    double e_fake = 0.0;         // S_G / N_eff
    bool margin_updated = false; // the end-of-epoch check fired
    std::vector<double> batch_real_sums;
    std::vector<double> batch_fake_sums;
    std::vector<std::pair<std::string, double>> metrics;
};

struct RunTrace {
    double initial_margin = 0.0;  // m_1 (adaptive) or the fixed margin
    double final_margin = 0.0;
    std::vector<EpochRecord> epochs;
};

struct RunResult {
    RunTrace trace;
    GanModel model;
};

/// Optional per-epoch callback, e.g. to attach metric snapshots.
using EpochHook = std::function<void(GanModel&, EpochRecord&)>;

/// Pure auto-encoder training on real data (margin 0) for `epochs` passes,
/// then returns the mean real energy over one full pass.
double pretrain(GanModel& model, const io::Dataset& data, std::size_t epochs, std::size_t batch_size, io::Rng& rng);

/// One epoch of alternating discriminator and generator updates over
/// floor(N / b) shuffled batches. Each batch draws one latent batch for the
/// discriminator step and a fresh one for the generator step. The margin
/// check runs once at the end of the epoch, in magan mode only.
EpochRecord train_epoch(GanModel& model, MarginState& ms, const io::Dataset& data, const TrainConfig& config,
                        io::Rng& rng, std::size_t epoch_index);

/// Pre-training (magan) or fixed margin (ebgan), then max_epochs epochs.
RunResult train(const TrainConfig& config, const io::Dataset& data, const EpochHook& hook = {});
RunResult train(const TrainConfig& config, const EpochHook& hook = {});

/// Independent seeds derived from the run seed for the dataset, the network
/// initialisation and the training stream.
struct RunSeeds {
    std::uint64_t data = 0;
    std::uint64_t model = 0;
    std::uint64_t training = 0;
};
RunSeeds derive_seeds(std::uint64_t seed);

/// Model and training generator exactly as train() derives them from the seed.
struct RunSetup {
    GanModel model;
    io::Rng rng;
};
RunSetup make_run_setup(const TrainConfig& config);

/// Pearson correlation of two equal-length series.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace magan::gan
