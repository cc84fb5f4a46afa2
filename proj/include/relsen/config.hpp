#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relsen/model.hpp"

namespace relsen {

/// Engine hyperparameters. Per-process vectors are indexed like the topology.
struct Config {
    double ratio = 0.7;                      // explanatory-sensor ratio r
    std::size_t neighbors = 48;              // K
    std::vector<std::size_t> soft_sensors;   // M_p
    std::vector<double> gamma;               // γ_p
    std::size_t window = 72;                 // l
    std::size_t warmup_length = 168;         // T
    double epsilon = 1e-5;
    std::size_t history_capacity = 500;
    std::uint64_t seed = 0;
    std::size_t max_warmup_iterations = 500;
    // Refit warm-up soft sensors on the current state iterate every
    // coordinate-descent round instead of once on the initial states.
    bool refit_warmup_soft_sensors = false;

    /// Defaults for `topology`: M_p chosen so every process has five hard
    /// plus soft sensors, γ_p = 1.
    static Config defaults_for(const Topology& topology);

    /// Throws ConfigError on any violated constraint, including T > max(K, l).
    void validate(const Topology& topology) const;
};

/// Topology plus hyperparameters, as read from a config file.
struct EngineSetup {
    Topology topology;
    Config config;
};

/// Parses the YAML config format documented in README.md. Errors carry the
/// source line of the offending node.
EngineSetup parse_config(const std::string& text, const std::string& origin = "<config>");
EngineSetup load_config(const std::filesystem::path& path);

/// Inverse of parse_config; used for config snapshots in reports.
std::string dump_config(const EngineSetup& setup);

}  // namespace relsen
