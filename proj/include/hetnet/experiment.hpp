#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/model.hpp"
#include "hetnet/simulator.hpp"

namespace hetnet::cli {

struct SweepAxis {
    std::string name;  // e.g. "tau0", "tier2.lambda", "T2", "R1"
    double min = 0.0;
    double max = 0.0;
    int steps = 0;  // >= 2
};

struct ExperimentSpec {
    std::string command;
    std::string config_path;  // empty -> built-in default config
    std::string output_path;  // empty -> stdout
    std::string format = "csv";
    std::vector<SweepAxis> sweeps;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    double tolerance = 1e-6;
    bool exact = false;
};

struct LoadedConfig {
    NetworkConfig network;
    sim::SimConfig sim;
    ThresholdVector thresholds;  // watts; may be empty when a command never uses it

    bool operator==(const LoadedConfig&) const = default;
};

// Two-tier macro/pico reference setup used throughout: thresholds preset to
// mean radii of 500 m and 150 m, tau0 = 3.5 nats/s/Hz.
LoadedConfig default_config();

LoadedConfig load_config(const std::string& path);
void save_config(const LoadedConfig& cfg, const std::string& path);

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_infeasible = 3;
inline constexpr int exit_numeric = 4;

// Runs one command, writing the result table to spec.output_path (or stdout)
// and diagnostics to stderr.  Returns one of the exit_* codes; rows computed
// before a failure are already flushed.
int run_experiment(const ExperimentSpec& spec);

const std::vector<std::string>& known_commands();

}  // namespace hetnet::cli
