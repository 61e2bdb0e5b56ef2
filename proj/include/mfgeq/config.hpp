#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mfgeq/equilibrium.hpp"
#include "mfgeq/measures.hpp"
#include "mfgeq/value.hpp"

namespace mfgeq {

/// Scenario description read from a flat `key = value` file.
///
///     problem = section8
///     t0 = 0
///     T = 0.625
///     init = gaussian(0.06, 0.5, 10000)     # or samples(...), or file(path)
///     grid.M = 200
///     grid.J = 400
///     picard.max_iter = 200
///     seed = 7
///     probes.x = -1, 0, 1
struct ScenarioConfig {
    std::string problem = "section8";
    std::map<std::string, double> problem_params;

    double t0 = 0.0;
    double T = 0.0;

    enum class InitKind { Gaussian, Samples };
    InitKind init_kind = InitKind::Gaussian;
    double init_mean = 0.0;
    double init_std = 0.5;
    std::size_t init_n = 1000;
    std::vector<double> init_samples;

    std::size_t time_steps = 200;
    PicardConfig picard;

    std::uint64_t seed = 1;
    bool antithetic = true;

    std::filesystem::path out_dir = "out";
    std::vector<double> probes_x{0.0};

    EmpiricalMeasure initial_measure() const;
    NoiseSpec noise() const;
    double horizon() const noexcept { return T - t0; }

    /// Canonical `key = value` text that parses back to this config.
    std::string to_text() const;
};

/// Throws ConfigError naming the key and line on any malformed, unknown or
/// missing entry. `base_dir` resolves relative `file(...)` paths.
ScenarioConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {});
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace mfgeq
