#include "mfgeq/config.hpp"

#include <cerrno>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

namespace mfgeq {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string value;
    int line;
};

double to_double(const std::string& key, const Entry& e) {
    const std::string v = trim(e.value);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(key, e.line, "expected a number, got '" + e.value + "'");
    }
    return out;
}

std::uint64_t to_u64(const std::string& key, const Entry& e) {
    const std::string v = trim(e.value);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(key, e.line, "expected a nonnegative integer, got '" + e.value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const Entry& e) {
    const std::string v = trim(e.value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, e.line, "expected true/false, got '" + e.value + "'");
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, {item, e.line}));
    if (out.empty()) throw ConfigError(key, e.line, "expected a comma-separated list of numbers");
    return out;
}

// Splits "name(a, b, c)" into name and argument text.
bool split_call(const std::string& v, std::string& name, std::string& args) {
    const auto open = v.find('(');
    if (open == std::string::npos || v.back() != ')') return false;
    name = trim(std::string_view(v).substr(0, open));
    args = v.substr(open + 1, v.size() - open - 2);
    return true;
}

void parse_init(ScenarioConfig& cfg, const Entry& e, const std::filesystem::path& base_dir) {
    const std::string v = trim(e.value);
    std::string name, args;
    if (!split_call(v, name, args)) {
        throw ConfigError("init", e.line, "expected gaussian(mean, std, N), samples(x1, ...) or file(path)");
    }
    if (name == "gaussian") {
        const auto parts = to_list("init", {args, e.line});
        if (parts.size() != 3) throw ConfigError("init", e.line, "gaussian takes (mean, std, N)");
        if (parts[1] < 0.0) throw ConfigError("init", e.line, "gaussian std must be nonnegative");
        if (parts[2] < 1.0 || parts[2] != static_cast<double>(static_cast<std::size_t>(parts[2]))) {
            throw ConfigError("init", e.line, "gaussian N must be a positive integer");
        }
        cfg.init_kind = ScenarioConfig::InitKind::Gaussian;
        cfg.init_mean = parts[0];
        cfg.init_std = parts[1];
        cfg.init_n = static_cast<std::size_t>(parts[2]);
    } else if (name == "samples") {
        cfg.init_kind = ScenarioConfig::InitKind::Samples;
        cfg.init_samples = to_list("init", {args, e.line});
    } else if (name == "file") {
        const std::filesystem::path p = base_dir / trim(args);
        std::ifstream in(p);
        if (!in) throw ConfigError("init", e.line, "cannot open sample file " + p.string());
        try {
            const auto mu = read_measure_csv(in);
            cfg.init_kind = ScenarioConfig::InitKind::Samples;
            cfg.init_samples.assign(mu.samples().begin(), mu.samples().end());
        } catch (const std::exception& ex) {
            throw ConfigError("init", e.line, ex.what());
        }
    } else {
        throw ConfigError("init", e.line, "unknown initial measure '" + name + "'");
    }
}

}  // namespace

EmpiricalMeasure ScenarioConfig::initial_measure() const {
    if (init_kind == InitKind::Samples) return EmpiricalMeasure(init_samples);
    return gaussian_quantiles(init_mean, init_std, init_n);
}

NoiseSpec ScenarioConfig::noise() const {
    const std::size_t n = init_kind == InitKind::Samples ? init_samples.size() : init_n;
    return NoiseSpec{seed, n, time_steps, antithetic};
}

std::string ScenarioConfig::to_text() const {
    std::ostringstream os;
    os << "problem = " << problem << '\n';
    for (const auto& [k, v] : problem_params) os << "problem." << k << " = " << csv::format(v) << '\n';
    os << "t0 = " << csv::format(t0) << '\n';
    os << "T = " << csv::format(T) << '\n';
    if (init_kind == InitKind::Gaussian) {
        os << "init = gaussian(" << csv::format(init_mean) << ", " << csv::format(init_std) << ", " << init_n << ")\n";
    } else {
        os << "init = samples(";
        for (std::size_t i = 0; i < init_samples.size(); ++i) os << (i ? ", " : "") << csv::format(init_samples[i]);
        os << ")\n";
    }
    os << "grid.M = " << time_steps << '\n';
    os << "grid.J = " << picard.space_intervals << '\n';
    os << "grid.c1 = " << csv::format(picard.c1) << '\n';
    os << "grid.c2 = " << csv::format(picard.c2) << '\n';
    os << "picard.max_iter = " << picard.max_iter << '\n';
    os << "picard.tau_picard = " << csv::format(picard.tau_picard) << '\n';
    os << "picard.tau_mfe = " << csv::format(picard.tau_mfe) << '\n';
    os << "picard.drift_bound = " << csv::format(picard.drift_bound) << '\n';
    os << "picard.stall_window = " << picard.stall_window << '\n';
    os << "picard.stall_rel = " << csv::format(picard.stall_rel) << '\n';
    os << "seed = " << seed << '\n';
    os << "noise.antithetic = " << (antithetic ? "true" : "false") << '\n';
    os << "output.dir = " << out_dir.string() << '\n';
    os << "probes.x = ";
    for (std::size_t i = 0; i < probes_x.size(); ++i) os << (i ? ", " : "") << csv::format(probes_x[i]);
    os << '\n';
    return os.str();
}

ScenarioConfig parse_config(std::istream& is, const std::filesystem::path& base_dir) {
    std::map<std::string, Entry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("", lineno, "expected 'key = value', got '" + text + "'");
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) throw ConfigError("", lineno, "empty key");
        if (value.empty()) throw ConfigError(key, lineno, "empty value");
        if (!entries.emplace(key, Entry{value, lineno}).second) throw ConfigError(key, lineno, "duplicate key");
    }

    ScenarioConfig cfg;
    std::set<std::string> used;
    auto take = [&](const std::string& key) -> const Entry* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        used.insert(key);
        return &it->second;
    };
    auto size_value = [&](const std::string& key, const Entry& e, std::size_t min) {
        const auto v = to_u64(key, e);
        if (v < min) throw ConfigError(key, e.line, "must be at least " + std::to_string(min));
        return static_cast<std::size_t>(v);
    };
    auto positive = [&](const std::string& key, const Entry& e) {
        const double v = to_double(key, e);
        if (!(v > 0.0)) throw ConfigError(key, e.line, "must be positive");
        return v;
    };

    if (auto e = take("problem")) cfg.problem = e->value;
    for (const auto& [key, e] : entries) {
        if (key.rfind("problem.", 0) == 0) {
            cfg.problem_params[key.substr(8)] = to_double(key, e);
            used.insert(key);
        }
    }
    if (auto e = take("t0")) cfg.t0 = to_double("t0", *e);
    if (auto e = take("T")) {
        cfg.T = to_double("T", *e);
        if (!(cfg.T > cfg.t0)) throw ConfigError("T", e->line, "T must exceed t0");
    } else {
        throw ConfigError("T", 0, "required key is missing");
    }
    if (auto e = take("init")) parse_init(cfg, *e, base_dir);
    if (auto e = take("grid.M")) cfg.time_steps = size_value("grid.M", *e, 1);
    if (auto e = take("grid.J")) cfg.picard.space_intervals = size_value("grid.J", *e, 2);
    if (auto e = take("grid.c1")) cfg.picard.c1 = positive("grid.c1", *e);
    if (auto e = take("grid.c2")) cfg.picard.c2 = positive("grid.c2", *e);
    if (auto e = take("picard.max_iter")) cfg.picard.max_iter = size_value("picard.max_iter", *e, 1);
    if (auto e = take("picard.tau_picard")) cfg.picard.tau_picard = positive("picard.tau_picard", *e);
    if (auto e = take("picard.tau_mfe")) cfg.picard.tau_mfe = positive("picard.tau_mfe", *e);
    if (auto e = take("picard.drift_bound")) cfg.picard.drift_bound = to_double("picard.drift_bound", *e);
    if (auto e = take("picard.stall_window")) cfg.picard.stall_window = size_value("picard.stall_window", *e, 0);
    if (auto e = take("picard.stall_rel")) cfg.picard.stall_rel = positive("picard.stall_rel", *e);
    if (auto e = take("seed")) cfg.seed = to_u64("seed", *e);
    if (auto e = take("noise.antithetic")) cfg.antithetic = to_bool("noise.antithetic", *e);
    if (auto e = take("output.dir")) cfg.out_dir = e->value;
    if (auto e = take("probes.x")) cfg.probes_x = to_list("probes.x", *e);

    for (const auto& [key, e] : entries) {
        if (!used.count(key)) throw ConfigError(key, e.line, "unknown key");
    }
    if (cfg.init_kind == ScenarioConfig::InitKind::Samples && cfg.init_samples.empty()) {
        throw ConfigError("init", 0, "no samples given");
    }
    return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

}  // namespace mfgeq
