#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "magan/io/config.hpp"

namespace magan::cli {

/// Raised for invalid command-line usage; main() prints it with the usage text.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out_dir = "magan-out";
    io::KeyValues overrides;  // flag values, already in config-key form
};

struct TrainOptions {
    CommonOptions common;
    std::size_t trials = 1;
    std::size_t eval_every = 10;
    std::size_t eval_samples = 2000;
};

struct SimulateOptions {
    CommonOptions common;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    bool dynamics = true;
    std::optional<std::filesystem::path> out_dir;
};

struct ScoreOptions {
    CommonOptions common;
    std::string source = "real";  // real | collapsed | samples
    std::optional<std::filesystem::path> samples;
    std::size_t batches = 10;
    std::size_t batch_size = 1000;
};

struct PlotOptions {
    std::filesystem::path input;
    std::filesystem::path out_dir = "magan-out";
    std::optional<std::filesystem::path> real;  // optional real points for scatter
    std::optional<double> margin_line;
};

int run_train(const TrainOptions& options);
int run_simulate(const SimulateOptions& options);
int run_verify(const VerifyOptions& options);
int run_score(const ScoreOptions& options);
int run_plot(const PlotOptions& options);

}  // namespace magan::cli
