#include "magan/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace magan::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

using Setter = std::function<void(const std::string& key, const std::string& value)>;

void apply(const KeyValues& values, const std::map<std::string, Setter, std::less<>>& setters) {
    for (const auto& [key, value] : values) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(key, "unknown key");
        it->second(key, value);
    }
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not of the form key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + " has an empty key");
        out[key] = value;
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

gan::TrainConfig make_train_config(const KeyValues& values) {
    gan::TrainConfig c;
    auto size = [](std::size_t& field) {
        return [&field](const std::string& k, const std::string& v) { field = static_cast<std::size_t>(to_uint(k, v)); };
    };
    auto real = [](double& field) { return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); }; };

    const std::map<std::string, Setter, std::less<>> setters{
        {"alpha", real(c.optimizer.alpha)},
        {"beta1", real(c.optimizer.beta1)},
        {"beta2", real(c.optimizer.beta2)},
        {"b", size(c.batch_size)},
        {"n", size(c.train_size)},
        {"t_max", size(c.max_epochs)},
        {"pretrain_epochs", size(c.pretrain_epochs)},
        {"seed", [&](const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
        {"mode",
         [&](const std::string& k, const std::string& v) {
             try {
                 c.mode = gan::parse_train_mode(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"margin", [&](const std::string& k, const std::string& v) { c.fixed_margin = to_double(k, v); }},
        {"dataset",
         [&](const std::string& k, const std::string& v) {
             try {
                 c.dataset = parse_dataset_id(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"sigma", real(c.sigma)},
        {"n_z", size(c.arch.latent_dim)},
        {"code_dim", size(c.arch.code_dim)},
        {"hidden_width", size(c.arch.hidden_width)},
        {"hidden_layers", size(c.arch.hidden_layers)},
    };
    apply(values, setters);

    try {
        c.validate();
    } catch (const gan::InvalidConfig& e) {
        throw ConfigError(e.key(), e.reason());
    }
    return c;
}

gan::TrainConfig parse_train_config(const KeyValues& file, const KeyValues& flags) {
    return make_train_config(merge(file, flags));
}

void SimConfig::validate() const {
    if (support_size == 0) throw ConfigError("k", "must be positive");
    if (!(margin > 0.0)) throw ConfigError("margin", "must be positive");
    if (!(eta > 0.0)) throw ConfigError("eta", "must be positive");
    if (!(tolerance > 0.0)) throw ConfigError("tol", "must be positive");
}

SimConfig make_sim_config(const KeyValues& values) {
    SimConfig c;
    const std::map<std::string, Setter, std::less<>> setters{
        {"mode",
         [&](const std::string& k, const std::string& v) {
             try {
                 c.mode = exact::parse_sim_mode(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"k", [&](const std::string& k, const std::string& v) { c.support_size = static_cast<std::size_t>(to_uint(k, v)); }},
        {"margin", [&](const std::string& k, const std::string& v) { c.margin = to_double(k, v); }},
        {"eta", [&](const std::string& k, const std::string& v) { c.eta = to_double(k, v); }},
        {"max_steps", [&](const std::string& k, const std::string& v) { c.max_steps = static_cast<std::size_t>(to_uint(k, v)); }},
        {"tol", [&](const std::string& k, const std::string& v) { c.tolerance = to_double(k, v); }},
        {"seed", [&](const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
    };
    apply(values, setters);
    c.validate();
    return c;
}

SimConfig parse_sim_config(const KeyValues& file, const KeyValues& flags) { return make_sim_config(merge(file, flags)); }

std::string to_key_values(const gan::TrainConfig& c) {
    std::ostringstream out;
    out << "alpha = " << fmt(c.optimizer.alpha) << '\n'
        << "beta1 = " << fmt(c.optimizer.beta1) << '\n'
        << "beta2 = " << fmt(c.optimizer.beta2) << '\n'
        << "b = " << c.batch_size << '\n'
        << "n = " << c.train_size << '\n'
        << "t_max = " << c.max_epochs << '\n'
        << "pretrain_epochs = " << c.pretrain_epochs << '\n'
        << "seed = " << c.seed << '\n'
        << "mode = " << gan::to_string(c.mode) << '\n';
    if (c.fixed_margin) out << "margin = " << fmt(*c.fixed_margin) << '\n';
    out << "dataset = " << to_string(c.dataset) << '\n'
        << "sigma = " << fmt(c.sigma) << '\n'
        << "n_z = " << c.arch.latent_dim << '\n'
        << "code_dim = " << c.arch.code_dim << '\n'
        << "hidden_width = " << c.arch.hidden_width << '\n'
        << "hidden_layers = " << c.arch.hidden_layers << '\n';
    return out.str();
}

std::string to_key_values(const SimConfig& c) {
    std::ostringstream out;
    out << "mode = " << exact::to_string(c.mode) << '\n'
        << "k = " << c.support_size << '\n'
        << "margin = " << fmt(c.margin) << '\n'
        << "eta = " << fmt(c.eta) << '\n'
        << "max_steps = " << c.max_steps << '\n'
        << "tol = " << fmt(c.tolerance) << '\n'
        << "seed = " << c.seed << '\n';
    return out.str();
}

}  // namespace magan::io
