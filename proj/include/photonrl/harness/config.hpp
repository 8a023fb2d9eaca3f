#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "photonrl/agents/agent.hpp"
#include "photonrl/envs/bandit.hpp"
#include "photonrl/envs/gridworld.hpp"
#include "photonrl/harness/toml.hpp"

namespace photonrl {

enum class ExperimentKind {
    GridworldLearning,     // learning curve of one population
    GridworldNoiseCompare, // ideal vs noisy phase writes, shared seeds
    BanditBoost,           // defragmentation on vs off, shared seeds
    BanditFactorized,      // factorized bandit + node-probability snapshot
    EquivalenceSuite,      // built-in verification checks
};

enum class EnvKind { Gridworld, BanditFlat, BanditFactorized };

std::string to_string(ExperimentKind kind);
std::string to_string(EnvKind kind);
std::string to_string(AgentModel model);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::GridworldLearning;
    AgentConfig agent;

    EnvKind env = EnvKind::Gridworld;
    GridSpec grid;
    FlatBanditSpec flat;
    double factorized_x = 0.5;
    double factorized_epsilon = 0.004;
    FactorizedBanditSpec::Combine factorized_combine = FactorizedBanditSpec::Combine::Sum;
    std::optional<std::vector<double>> factorized_table1;  // override preset tables
    std::optional<std::vector<double>> factorized_table2;
    std::optional<std::vector<double>> factorized_table3;

    long population = 100;
    long population_full = 0;  // used by --full-scale; 0 = 10x population
    long trials = 100;
    std::uint64_t master_seed = 1;
    int parallelism = 0;  // worker threads; 0 = hardware concurrency
    std::string out_dir = "out";
    bool cap_counts_as_length = true;  // capped episodes enter the mean at the cap

    FactorizedBanditSpec factorized_spec() const;
    void validate() const;
};

// Strict loader: every key is checked against the schema; unknown sections or
// keys abort with a message naming them.
ExperimentConfig config_from_toml(const TomlTable& table);
ExperimentConfig load_config(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace photonrl
