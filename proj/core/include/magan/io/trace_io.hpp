#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "magan/autodiff/tensor.hpp"
#include "magan/exact/simulate.hpp"
#include "magan/gan/trainer.hpp"

namespace magan::io {

inline constexpr const char* kTraceHeader = "epoch,margin,e_real,e_fake,margin_updated";
inline constexpr const char* kSimTraceHeader = "step,margin,e_data,e_gen,tv,margin_updated";

/// Shortest-looking decimal with 17 significant digits; parses back to the same bits.
std::string format_double(double v);

/// Training trace as CSV, one row per epoch. Floats keep 17 significant digits.
void write_trace(const gan::RunTrace& trace, const std::filesystem::path& path);
std::string trace_csv(const gan::RunTrace& trace);
/// Reads the CSV columns back (batch sums and metric snapshots are not stored).
std::vector<gan::EpochRecord> read_trace(const std::filesystem::path& path);
std::vector<gan::EpochRecord> parse_trace_csv(const std::string& text);

void write_sim_trace(const exact::SimTrace& trace, const std::filesystem::path& path);
std::string sim_trace_csv(const exact::SimTrace& trace);
std::vector<exact::SimStep> read_sim_trace(const std::filesystem::path& path);

/// Sample matrix as CSV with header x0,x1,...; one row per sample.
std::string points_csv(const ad::Tensor& points);
void write_points(const ad::Tensor& points, const std::filesystem::path& path);
ad::Tensor read_points(const std::filesystem::path& path);

using MetricValue = std::variant<bool, std::int64_t, double, std::string>;
using MetricRecord = std::vector<std::pair<std::string, MetricValue>>;

/// One JSON object per line, keys in record order.
void write_metrics(const std::vector<MetricRecord>& records, const std::filesystem::path& path);
std::string metrics_lines(const std::vector<MetricRecord>& records);
std::vector<MetricRecord> read_metrics(const std::filesystem::path& path);

}  // namespace magan::io
