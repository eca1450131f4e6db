#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "magan/gan/trainer.hpp"

namespace {

using magan::cli::CommonOptions;

// Binds `flag` to config key `key`. The raw text is validated by the config
// parser, so flag and file values go through the same checks.
void key_flag(CLI::App* app, CommonOptions& common, const std::string& flag, const std::string& key,
              const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&common, key](const std::string& v) { common.overrides[key] = v; }, help);
}

void common_flags(CLI::App* app, CommonOptions& common) {
    app->add_option_function<std::uint64_t>(
        "--seed", [&common](std::uint64_t v) { common.seed = v; }, "Run seed");
    app->add_option_function<std::string>(
        "--config", [&common](const std::string& v) { common.config = v; }, "key=value config file")
        ->check(CLI::ExistingFile);
    app->add_option("--out-dir", common.out_dir, "Directory for every output file")->capture_default_str();
    app->add_option_function<std::vector<std::string>>(
        "--set",
        [&common](const std::vector<std::string>& pairs) {
            for (const auto& p : pairs) {
                const auto eq = p.find('=');
                if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got " + p);
                common.overrides[p.substr(0, eq)] = p.substr(eq + 1);
            }
        },
        "Override any config key (repeatable)");
}

void train_flags(CLI::App* app, CommonOptions& c) {
    key_flag(app, c, "--mode", "mode", "magan (adaptive margin) or ebgan (fixed margin)");
    key_flag(app, c, "--margin", "margin", "Fixed margin, required with --mode ebgan");
    key_flag(app, c, "--alpha", "alpha", "Adamax learning rate");
    key_flag(app, c, "--beta1", "beta1", "Adamax first-moment decay");
    key_flag(app, c, "--beta2", "beta2", "Adamax infinity-norm decay");
    key_flag(app, c, "-b,--batch-size", "b", "Batch size");
    key_flag(app, c, "-n,--train-size", "n", "Training-set size");
    key_flag(app, c, "--epochs", "t_max", "Maximum number of epochs");
    key_flag(app, c, "--pretrain-epochs", "pretrain_epochs", "Auto-encoder pre-training epochs");
    key_flag(app, c, "--dataset", "dataset", "ring8, grid25 or two_moons");
    key_flag(app, c, "--sigma", "sigma", "Per-mode standard deviation");
    key_flag(app, c, "--n-z", "n_z", "Latent dimension");
    key_flag(app, c, "--code-dim", "code_dim", "Auto-encoder code width");
    key_flag(app, c, "--hidden-width", "hidden_width", "Hidden layer width");
    key_flag(app, c, "--hidden-layers", "hidden_layers", "Number of hidden layers");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-margin GAN laboratory and exact discrete verifier", "magan"};
    app.require_subcommand(1);

    magan::cli::TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train an auto-encoder GAN and write trace, metrics and plots");
    common_flags(train_cmd, train.common);
    train_flags(train_cmd, train.common);
    train_cmd->add_option("--trials", train.trials, "Run this many consecutive seeds concurrently")
        ->capture_default_str();
    train_cmd->add_option("--eval-every", train.eval_every, "Epochs between mode-coverage snapshots (0 disables)")
        ->capture_default_str();
    train_cmd->add_option("--eval-samples", train.eval_samples, "Generated samples per snapshot")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    magan::cli::SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Idealized optimal-discriminator dynamics on a finite support");
    common_flags(sim_cmd, sim.common);
    key_flag(sim_cmd, sim.common, "--mode", "mode", "magan or ebgan");
    key_flag(sim_cmd, sim.common, "--margin", "margin", "Initial margin");
    key_flag(sim_cmd, sim.common, "-k,--support", "k", "Support size");
    key_flag(sim_cmd, sim.common, "--eta", "eta", "Generator step size");
    key_flag(sim_cmd, sim.common, "--max-steps", "max_steps", "Step limit");
    key_flag(sim_cmd, sim.common, "--tol", "tol", "Stop once TV falls below this");

    magan::cli::VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the exact theory property suite; nonzero exit on failure");
    verify_cmd->add_option("--seed", verify.seed, "Suite seed")->capture_default_str();
    verify_cmd->add_option("--trials", verify.trials, "Random pairs per check")->capture_default_str();
    verify_cmd->add_flag("!--no-dynamics", verify.dynamics, "Skip the convergence checks");
    verify_cmd->add_option_function<std::string>(
        "--out-dir", [&verify](const std::string& v) { verify.out_dir = v; }, "Also write verify.jsonl here");

    magan::cli::ScoreOptions score;
    auto* score_cmd = app.add_subcommand("score", "Classifier-based score and mode histogram of a sample source");
    common_flags(score_cmd, score.common);
    key_flag(score_cmd, score.common, "--dataset", "dataset", "ring8 or grid25");
    key_flag(score_cmd, score.common, "--sigma", "sigma", "Per-mode standard deviation");
    score_cmd->add_option("--source", score.source, "real, collapsed or samples")
        ->capture_default_str()
        ->check(CLI::IsMember({"real", "collapsed", "samples"}));
    score_cmd->add_option_function<std::string>(
        "--samples", [&score](const std::string& v) { score.samples = v; }, "Points CSV (e.g. samples.csv from train)")
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--batches", score.batches, "Number of batches")->capture_default_str();
    score_cmd->add_option("--batch-size", score.batch_size, "Samples per batch")->capture_default_str();

    magan::cli::PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "Re-render an SVG from a saved trace or points file");
    plot_cmd->add_option("input", plot.input, "trace.csv, sim_trace.csv or samples.csv")
        ->required()
        ->check(CLI::ExistingFile);
    plot_cmd->add_option("--out-dir", plot.out_dir, "Directory for the SVG")->capture_default_str();
    plot_cmd->add_option_function<std::string>(
        "--real", [&plot](const std::string& v) { plot.real = v; }, "Real points CSV drawn under a scatter")
        ->check(CLI::ExistingFile);
    plot_cmd->add_option_function<double>(
        "--margin-line", [&plot](double v) { plot.margin_line = v; }, "Draw a horizontal margin line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*train_cmd) return magan::cli::run_train(train);
        if (*sim_cmd) return magan::cli::run_simulate(sim);
        if (*verify_cmd) return magan::cli::run_verify(verify);
        if (*score_cmd) return magan::cli::run_score(score);
        if (*plot_cmd) return magan::cli::run_plot(plot);
    } catch (const magan::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const magan::io::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const magan::gan::TrainingDiverged& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
