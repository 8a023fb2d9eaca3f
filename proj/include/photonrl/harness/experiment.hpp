#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonrl/agents/agent.hpp"
#include "photonrl/envs/environment.hpp"
#include "photonrl/harness/config.hpp"

namespace photonrl {

struct EpisodeStats {
    long steps = 0;
    double reward = 0.0;
};

// One percept -> decision -> action -> update loop until the environment
// reports done.
EpisodeStats run_episode(Agent& agent, Environment& env);

// Per-trial aggregates of one experiment plus metadata. Rows are a pure
// function of (config, master seed); wall_seconds is informational only and
// never enters result.csv.
struct ExperimentResult {
    std::vector<std::string> columns;        // first column is "trial"
    std::vector<std::vector<double>> rows;   // one row per trial
    nlohmann::json summary;
    nlohmann::json config_echo;
    std::uint64_t master_seed = 0;
    std::string kind;
    double wall_seconds = 0.0;

    int column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-trial difference of collected mean reward, defragmenting minus not.
std::vector<double> compute_boost(const std::vector<double>& mean_reward_defrag,
                                  const std::vector<double>& mean_reward_nodefrag);

// Decimal text with 17 significant digits: doubles survive a round-trip.
std::string format_double(double v);

std::string result_csv_text(const ExperimentResult& result);
nlohmann::json result_json(const ExperimentResult& result);

// Writes result.csv and result.json under `dir`, creating it if needed.
void write_result_files(const ExperimentResult& result, const std::string& dir);

}  // namespace photonrl
