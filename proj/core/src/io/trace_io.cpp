#include "magan/io/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace magan::io {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw std::runtime_error("malformed number '" + s + "' in trace");
    return v;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text, const char* header, std::size_t columns) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header) throw std::runtime_error(std::string("trace header must be '") + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != columns) throw std::runtime_error("trace row has wrong column count: " + line);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trace_csv(const gan::RunTrace& trace) {
    std::string out = std::string(kTraceHeader) + '\n';
    for (const auto& r : trace.epochs) {
        out += std::to_string(r.epoch) + ',' + format_double(r.margin) + ',' + format_double(r.e_real) + ',' +
               format_double(r.e_fake) + ',' + (r.margin_updated ? "1" : "0") + '\n';
    }
    return out;
}

void write_trace(const gan::RunTrace& trace, const std::filesystem::path& path) { write_text(path, trace_csv(trace)); }

std::vector<gan::EpochRecord> parse_trace_csv(const std::string& text) {
    std::vector<gan::EpochRecord> out;
    for (const auto& f : parse_csv(text, kTraceHeader, 5)) {
        gan::EpochRecord r;
        r.epoch = static_cast<std::size_t>(std::stoull(f[0]));
        r.margin = parse_double(f[1]);
        r.e_real = parse_double(f[2]);
        r.e_fake = parse_double(f[3]);
        r.margin_updated = f[4] == "1";
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<gan::EpochRecord> read_trace(const std::filesystem::path& path) { return parse_trace_csv(read_text(path)); }

std::string sim_trace_csv(const exact::SimTrace& trace) {
    std::string out = std::string(kSimTraceHeader) + '\n';
    for (const auto& s : trace.steps) {
        out += std::to_string(s.step) + ',' + format_double(s.margin) + ',' + format_double(s.e_data) + ',' +
               format_double(s.e_gen) + ',' + format_double(s.tv) + ',' + (s.margin_updated ? "1" : "0") + '\n';
    }
    return out;
}

void write_sim_trace(const exact::SimTrace& trace, const std::filesystem::path& path) {
    write_text(path, sim_trace_csv(trace));
}

std::vector<exact::SimStep> read_sim_trace(const std::filesystem::path& path) {
    std::vector<exact::SimStep> out;
    for (const auto& f : parse_csv(read_text(path), kSimTraceHeader, 6)) {
        exact::SimStep s;
        s.step = static_cast<std::size_t>(std::stoull(f[0]));
        s.margin = parse_double(f[1]);
        s.e_data = parse_double(f[2]);
        s.e_gen = parse_double(f[3]);
        s.tv = parse_double(f[4]);
        s.margin_updated = f[5] == "1";
        out.push_back(s);
    }
    return out;
}

std::string points_csv(const ad::Tensor& points) {
    if (points.rank() != 2) throw std::invalid_argument("points_csv: expected a [n x d] matrix");
    const std::size_t n = points.rows(), d = points.cols();
    std::string out;
    for (std::size_t j = 0; j < d; ++j) out += (j == 0 ? "x" : ",x") + std::to_string(j);
    out += '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (j != 0) out += ',';
            out += format_double(points.at(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_points(const ad::Tensor& points, const std::filesystem::path& path) { write_text(path, points_csv(points)); }

ad::Tensor read_points(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x0", 0) != 0) {
        throw std::runtime_error(path.string() + ": points header must start with 'x0'");
    }
    const std::size_t d = split(line, ',').size();
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != d) throw std::runtime_error(path.string() + ": row has wrong column count: " + line);
        for (const auto& f : fields) values.push_back(parse_double(f));
        ++rows;
    }
    if (rows == 0) throw std::runtime_error(path.string() + ": no points");
    return ad::Tensor({rows, d}, std::move(values));
}

std::string metrics_lines(const std::vector<MetricRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [key, value] : rec) {
            std::visit([&](const auto& v) { obj[key] = v; }, value);
        }
        out += obj.dump() + '\n';
    }
    return out;
}

void write_metrics(const std::vector<MetricRecord>& records, const std::filesystem::path& path) {
    write_text(path, metrics_lines(records));
}

std::vector<MetricRecord> read_metrics(const std::filesystem::path& path) {
    std::vector<MetricRecord> out;
    std::istringstream in(read_text(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto obj = nlohmann::ordered_json::parse(line);
        MetricRecord rec;
        for (const auto& [key, v] : obj.items()) {
            if (v.is_boolean()) {
                rec.emplace_back(key, v.get<bool>());
            } else if (v.is_number_integer()) {
                rec.emplace_back(key, v.get<std::int64_t>());
            } else if (v.is_number_float()) {
                rec.emplace_back(key, v.get<double>());
            } else if (v.is_string()) {
                rec.emplace_back(key, v.get<std::string>());
            } else {
                throw std::runtime_error("unsupported metric value for key '" + key + "'");
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace magan::io
