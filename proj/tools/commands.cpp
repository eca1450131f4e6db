#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "magan/exact/discrete.hpp"
#include "magan/exact/simulate.hpp"
#include "magan/exact/verify.hpp"
#include "magan/gan/trainer.hpp"
#include "magan/io/dataset.hpp"
#include "magan/io/svg.hpp"
#include "magan/io/trace_io.hpp"
#include "magan/metrics/classifier.hpp"
#include "magan/metrics/mode_coverage.hpp"
#include "magan/metrics/score.hpp"

namespace magan::cli {

namespace fs = std::filesystem;

namespace {

// Mode-coverage settings shared by train and score.
constexpr double kRadiusMultiple = 3.0;
constexpr double kMinFraction = 0.02;
// Curves are thinned to at most this many vertices per series.
constexpr std::size_t kMaxCurvePoints = 2000;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

io::KeyValues load_file_config(const CommonOptions& common) {
    return common.config ? io::read_key_values(*common.config) : io::KeyValues{};
}

io::KeyValues flag_values(const CommonOptions& common) {
    io::KeyValues flags = common.overrides;
    if (common.seed) flags["seed"] = std::to_string(*common.seed);
    return flags;
}

std::vector<std::size_t> thinned_indices(std::size_t n) {
    std::vector<std::size_t> idx;
    if (n <= kMaxCurvePoints) {
        for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
        return idx;
    }
    for (std::size_t k = 0; k < kMaxCurvePoints; ++k) idx.push_back(k * (n - 1) / (kMaxCurvePoints - 1));
    return idx;
}

io::PlotData energy_plot(const std::vector<gan::EpochRecord>& epochs, std::optional<double> fixed_margin,
                         const std::string& title) {
    io::PlotData plot;
    plot.title = title;
    plot.x_label = "epoch";
    plot.y_label = "energy";
    io::Series margin{"margin", "#2ca02c", {}, {}};
    io::Series real{"real energy", "#1f77b4", {}, {}};
    io::Series fake{"synthetic energy", "#d62728", {}, {}};
    for (std::size_t i : thinned_indices(epochs.size())) {
        const auto& e = epochs[i];
        const auto x = static_cast<double>(e.epoch);
        margin.x.push_back(x);
        margin.y.push_back(e.margin);
        real.x.push_back(x);
        real.y.push_back(e.e_real);
        fake.x.push_back(x);
        fake.y.push_back(e.e_fake);
    }
    if (fixed_margin) {
        plot.hlines.push_back({"fixed margin", *fixed_margin});
    } else {
        plot.series.push_back(std::move(margin));
    }
    plot.series.push_back(std::move(real));
    plot.series.push_back(std::move(fake));
    return plot;
}

io::PlotData sim_plot(const std::vector<exact::SimStep>& steps, const std::string& title) {
    io::PlotData plot;
    plot.title = title;
    plot.x_label = "step";
    plot.y_label = "value";
    io::Series tv{"TV distance", "#1f77b4", {}, {}};
    io::Series margin{"margin", "#2ca02c", {}, {}};
    for (std::size_t i : thinned_indices(steps.size())) {
        const auto& s = steps[i];
        tv.x.push_back(static_cast<double>(s.step));
        tv.y.push_back(s.tv);
        margin.x.push_back(static_cast<double>(s.step));
        margin.y.push_back(s.margin);
    }
    plot.series = {std::move(tv), std::move(margin)};
    return plot;
}

io::Series scatter_series(const ad::Tensor& points, std::string label, std::string color, std::size_t limit) {
    io::Series s{std::move(label), std::move(color), {}, {}};
    const std::size_t n = std::min(points.rows(), limit);
    for (std::size_t i = 0; i < n; ++i) {
        s.x.push_back(points.at(i, 0));
        s.y.push_back(points.at(i, 1));
    }
    return s;
}

// Constant margin with no updates: drawn as a reference line rather than a curve.
std::optional<double> constant_margin(const std::vector<gan::EpochRecord>& epochs) {
    if (epochs.empty()) return std::nullopt;
    for (const auto& e : epochs) {
        if (e.margin_updated || e.margin != epochs.front().margin) return std::nullopt;
    }
    return epochs.front().margin;
}

std::uint64_t eval_seed(std::uint64_t seed) {
    io::Rng rng(seed);
    for (int i = 0; i < 3; ++i) rng.split();  // the first three splits seed data, model and training
    return rng.split();
}

io::MetricRecord train_one(const gan::TrainConfig& config, const TrainOptions& options, const fs::path& dir) {
    fs::create_directories(dir);
    const gan::RunSeeds seeds = gan::derive_seeds(config.seed);
    const io::Dataset data = io::make_dataset(config.dataset, config.train_size, config.sigma, seeds.data);
    const ad::Tensor centers = data.mode_count() > 0 ? data.center_matrix() : ad::Tensor();
    const std::uint64_t eval = eval_seed(config.seed);

    auto snapshot = [&](gan::GanModel& model) {
        io::Rng rng(eval);
        return gan::generate(model, options.eval_samples, rng);
    };
    const auto hook = [&](gan::GanModel& model, gan::EpochRecord& record) {
        if (data.mode_count() == 0 || options.eval_every == 0) return;
        if (record.epoch % options.eval_every != 0 && record.epoch != config.max_epochs) return;
        const auto hist = metrics::mode_coverage(snapshot(model), centers, data.sigma, kRadiusMultiple, kMinFraction);
        record.metrics.emplace_back("covered_modes", static_cast<double>(hist.covered));
        record.metrics.emplace_back("unassigned_fraction",
                                    static_cast<double>(hist.unassigned) / static_cast<double>(hist.total));
    };

    gan::RunResult result = gan::train(config, data, hook);
    const auto& trace = result.trace;

    write_file(dir / "config.txt", io::to_key_values(config));
    io::write_trace(trace, dir / "trace.csv");

    std::vector<io::MetricRecord> records;
    std::size_t updates = 0;
    std::vector<double> real, fake;
    for (const auto& e : trace.epochs) {
        io::MetricRecord r{{"epoch", static_cast<std::int64_t>(e.epoch)},
                           {"margin", e.margin},
                           {"e_real", e.e_real},
                           {"e_fake", e.e_fake},
                           {"margin_updated", e.margin_updated}};
        for (const auto& [name, value] : e.metrics) r.emplace_back(name, value);
        records.push_back(std::move(r));
        if (e.margin_updated) ++updates;
        real.push_back(e.e_real);
        fake.push_back(e.e_fake);
    }

    const ad::Tensor samples = snapshot(result.model);
    io::write_points(samples, dir / "samples.csv");

    io::MetricRecord summary{{"record", std::string("summary")},
                             {"seed", static_cast<std::int64_t>(config.seed)},
                             {"mode", gan::to_string(config.mode)},
                             {"dataset", io::to_string(config.dataset)},
                             {"epochs", static_cast<std::int64_t>(trace.epochs.size())},
                             {"initial_margin", trace.initial_margin},
                             {"final_margin", trace.final_margin},
                             {"margin_updates", static_cast<std::int64_t>(updates)}};
    if (!trace.epochs.empty()) {
        summary.emplace_back("final_e_real", trace.epochs.back().e_real);
        summary.emplace_back("final_e_fake", trace.epochs.back().e_fake);
    }
    if (real.size() >= 2) summary.emplace_back("energy_correlation", gan::pearson(real, fake));
    if (data.mode_count() > 0) {
        const auto hist = metrics::mode_coverage(samples, centers, data.sigma, kRadiusMultiple, kMinFraction);
        summary.emplace_back("covered_modes", static_cast<std::int64_t>(hist.covered));
        summary.emplace_back("modes", static_cast<std::int64_t>(hist.mode_count()));
    }
    records.push_back(summary);
    io::write_metrics(records, dir / "metrics.jsonl");

    if (!trace.epochs.empty()) {
        std::optional<double> fixed;
        if (config.mode == gan::TrainMode::ebgan) fixed.emplace(trace.initial_margin);
        io::render_svg(io::PlotKind::curves,
                       energy_plot(trace.epochs, fixed, gan::to_string(config.mode) + " energies, seed " +
                                                              std::to_string(config.seed)),
                       dir / "energy.svg");
    }
    io::PlotData scatter;
    scatter.title = "real vs generated, seed " + std::to_string(config.seed);
    scatter.x_label = "x0";
    scatter.y_label = "x1";
    scatter.series.push_back(scatter_series(data.points(), "real", "#1f77b4", options.eval_samples));
    scatter.series.push_back(scatter_series(samples, "generated", "#d62728", options.eval_samples));
    io::render_svg(io::PlotKind::scatter, scatter, dir / "samples.svg");
    return summary;
}

std::string describe(const io::MetricRecord& record) {
    std::string out;
    for (const auto& [key, value] : record) {
        if (!out.empty()) out += ' ';
        out += key + '=';
        std::visit(
            [&out](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::string>) {
                    out += v;
                } else if constexpr (std::is_same_v<T, bool>) {
                    out += v ? "true" : "false";
                } else if constexpr (std::is_same_v<T, double>) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.6g", v);
                    out += buf;
                } else {
                    out += std::to_string(v);
                }
            },
            value);
    }
    return out;
}

}  // namespace

int run_train(const TrainOptions& options) {
    if (options.trials == 0) throw UsageError("--trials must be at least 1");
    const gan::TrainConfig base = io::parse_train_config(load_file_config(options.common), flag_values(options.common));
    const fs::path& out = options.common.out_dir;
    fs::create_directories(out);

    if (options.trials == 1) {
        std::cout << describe(train_one(base, options, out)) << '\n';
        return 0;
    }

    // Independent seeds run concurrently; results are collected in seed order.
    std::vector<io::MetricRecord> summaries(options.trials);
    std::vector<std::exception_ptr> errors(options.trials);
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < options.trials; ++i) {
        workers.emplace_back([&, i] {
            try {
                gan::TrainConfig config = base;
                config.seed = base.seed + i;
                summaries[i] = train_one(config, options, out / ("seed_" + std::to_string(config.seed)));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    io::write_metrics(summaries, out / "summary.jsonl");
    for (const auto& s : summaries) std::cout << describe(s) << '\n';
    return 0;
}

int run_simulate(const SimulateOptions& options) {
    const io::SimConfig config = io::parse_sim_config(load_file_config(options.common), flag_values(options.common));
    const fs::path& out = options.common.out_dir;
    fs::create_directories(out);

    io::Rng rng(config.seed);
    const exact::DiscreteDistPair start = exact::random_pair(rng, config.support_size, config.margin);
    exact::SimOptions sim;
    sim.eta = config.eta;
    sim.max_steps = config.max_steps;
    sim.tolerance = config.tolerance;
    const exact::SimTrace trace = exact::simulate(config.mode, start, sim);

    write_file(out / "config.txt", io::to_key_values(config));
    io::write_sim_trace(trace, out / "sim_trace.csv");
    const auto updates = std::count_if(trace.steps.begin(), trace.steps.end(),
                                       [](const exact::SimStep& s) { return s.margin_updated; });
    const io::MetricRecord summary{{"record", std::string("summary")},
                                   {"seed", static_cast<std::int64_t>(config.seed)},
                                   {"mode", exact::to_string(config.mode)},
                                   {"k", static_cast<std::int64_t>(config.support_size)},
                                   {"eta", config.eta},
                                   {"steps", static_cast<std::int64_t>(trace.steps.size())},
                                   {"initial_tv", trace.initial_tv},
                                   {"final_tv", exact::tv_distance(trace.final_pair)},
                                   {"final_margin", trace.final_pair.margin},
                                   {"margin_updates", static_cast<std::int64_t>(updates)},
                                   {"converged", trace.converged}};
    io::write_metrics({summary}, out / "metrics.jsonl");
    if (!trace.steps.empty()) {
        io::render_svg(io::PlotKind::curves, sim_plot(trace.steps, exact::to_string(config.mode) + " idealized dynamics"),
                       out / "sim.svg");
    }
    std::cout << describe(summary) << '\n';
    return 0;
}

int run_verify(const VerifyOptions& options) {
    exact::VerifyOptions v;
    v.seed = options.seed;
    v.trials = options.trials;
    v.convergence = options.dynamics;
    const auto results = exact::run_theory_suite(v);

    std::vector<io::MetricRecord> records;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << '\n';
        records.push_back({{"check", r.name},
                           {"passed", r.passed},
                           {"trials", static_cast<std::int64_t>(r.trials)},
                           {"failures", static_cast<std::int64_t>(r.failures)},
                           {"worst", r.worst}});
    }
    if (options.out_dir) {
        fs::create_directories(*options.out_dir);
        io::write_metrics(records, *options.out_dir / "verify.jsonl");
    }
    const bool ok = exact::all_passed(results);
    std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    return ok ? 0 : 1;
}

int run_score(const ScoreOptions& options) {
    if (options.batches < 2) throw UsageError("--batches must be at least 2");
    if (options.batch_size == 0) throw UsageError("--batch-size must be positive");
    const gan::TrainConfig config = io::parse_train_config(load_file_config(options.common), flag_values(options.common));
    if (io::mode_centers(config.dataset).empty()) {
        throw UsageError("score needs a dataset with mode labels (ring8 or grid25)");
    }
    const fs::path& out = options.common.out_dir;
    fs::create_directories(out);

    io::Rng seeds(config.seed);
    const std::uint64_t classifier_data_seed = seeds.split();
    const std::uint64_t classifier_seed = seeds.split();
    const std::uint64_t sample_seed = seeds.split();

    const io::Dataset labelled = io::make_dataset(config.dataset, 10000, config.sigma, classifier_data_seed);
    metrics::ReferenceClassifier classifier = metrics::train_reference_classifier(labelled, classifier_seed);

    const std::size_t total = options.batches * options.batch_size;
    ad::Tensor samples;
    if (options.source == "real") {
        samples = io::make_dataset(config.dataset, total, config.sigma, sample_seed).points();
    } else if (options.source == "collapsed") {
        samples = io::make_collapsed_dataset(config.dataset, total, config.sigma, 0, sample_seed).points();
    } else if (options.source == "samples") {
        if (!options.samples) throw UsageError("--source samples requires --samples <csv>");
        samples = io::read_points(*options.samples);
    } else {
        throw UsageError("--source must be real, collapsed or samples");
    }
    if (samples.cols() != labelled.dim) throw UsageError("samples must have " + std::to_string(labelled.dim) + " columns");

    const std::size_t per_batch = std::min(options.batch_size, samples.rows() / options.batches);
    if (per_batch == 0) throw UsageError("not enough samples for the requested number of batches");
    std::vector<ad::Tensor> batches;
    for (std::size_t b = 0; b < options.batches; ++b) {
        std::vector<double> values(samples.storage().begin() + static_cast<std::ptrdiff_t>(b * per_batch * samples.cols()),
                                   samples.storage().begin() +
                                       static_cast<std::ptrdiff_t>((b + 1) * per_batch * samples.cols()));
        batches.emplace_back(ad::Shape{per_batch, samples.cols()}, std::move(values));
    }
    const metrics::ScoreReport report = metrics::inception_style_score(classifier, batches);
    const auto hist = metrics::mode_coverage(samples, labelled.center_matrix(), labelled.sigma, kRadiusMultiple, kMinFraction);

    io::MetricRecord record{{"record", std::string("score")},
                            {"source", options.source},
                            {"dataset", io::to_string(config.dataset)},
                            {"seed", static_cast<std::int64_t>(config.seed)},
                            {"score_mean", report.mean},
                            {"score_std", report.stddev},
                            {"batches", static_cast<std::int64_t>(report.batch_count)},
                            {"samples_per_batch", static_cast<std::int64_t>(report.samples_per_batch)},
                            {"classifier_accuracy", classifier.held_out_accuracy},
                            {"covered_modes", static_cast<std::int64_t>(hist.covered)},
                            {"modes", static_cast<std::int64_t>(hist.mode_count())}};
    io::MetricRecord histogram{{"record", std::string("mode_histogram")},
                               {"unassigned", static_cast<std::int64_t>(hist.unassigned)}};
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        histogram.emplace_back("mode_" + std::to_string(i), static_cast<std::int64_t>(hist.counts[i]));
    }
    io::write_metrics({record, histogram}, out / "score.jsonl");
    std::cout << describe(record) << '\n';
    return 0;
}

int run_plot(const PlotOptions& options) {
    std::ifstream in(options.input);
    if (!in) throw std::runtime_error("cannot open " + options.input.string());
    std::string header;
    std::getline(in, header);
    in.close();

    fs::create_directories(options.out_dir);
    const fs::path target = options.out_dir / (options.input.stem().string() + ".svg");
    const std::string title = options.input.filename().string();
    if (header == io::kTraceHeader) {
        const auto epochs = io::read_trace(options.input);
        if (epochs.empty()) throw std::runtime_error(options.input.string() + ": trace has no epochs");
        const auto fixed = options.margin_line ? options.margin_line : constant_margin(epochs);
        io::render_svg(io::PlotKind::curves, energy_plot(epochs, fixed, title), target);
    } else if (header == io::kSimTraceHeader) {
        const auto steps = io::read_sim_trace(options.input);
        if (steps.empty()) throw std::runtime_error(options.input.string() + ": trace has no steps");
        io::render_svg(io::PlotKind::curves, sim_plot(steps, title), target);
    } else if (header.rfind("x0,x1", 0) == 0) {
        io::PlotData scatter;
        scatter.title = title;
        scatter.x_label = "x0";
        scatter.y_label = "x1";
        if (options.real) {
            scatter.series.push_back(scatter_series(io::read_points(*options.real), "real", "#1f77b4", SIZE_MAX));
        }
        scatter.series.push_back(scatter_series(io::read_points(options.input), "generated", "#d62728", SIZE_MAX));
        io::render_svg(io::PlotKind::scatter, scatter, target);
    } else {
        throw UsageError(options.input.string() + ": not a training trace, simulation trace or points file");
    }
    std::cout << "wrote " << target.string() << '\n';
    return 0;
}

}  // namespace magan::cli
