#include "photonrl/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "photonrl/harness/checks.hpp"
#include "photonrl/rng.hpp"

namespace photonrl {

namespace {

std::unique_ptr<Environment> make_environment(const ExperimentConfig& cfg) {
    switch (cfg.env) {
        case EnvKind::Gridworld:
            return std::make_unique<GridWorld3D>(cfg.grid);
        case EnvKind::BanditFlat:
            return std::make_unique<FlatTwoArmBandit>(cfg.flat);
        case EnvKind::BanditFactorized:
            return std::make_unique<FactorizedBandit>(cfg.factorized_spec());
    }
    throw std::logic_error("make_environment: unknown environment kind");
}

// Per-agent series produced by one population run.
struct AgentSeries {
    std::vector<double> metric;       // per trial: path length or collected reward
    std::vector<double> final_p_hat;  // upper-branch probability per node (optional)
};

// Runs `population` independently seeded agents for `trials` episodes each,
// fanning out over worker threads. Slot i of the output is agent i regardless
// of scheduling, so aggregation order is fixed.
std::vector<AgentSeries> run_population(const ExperimentConfig& cfg, const AgentConfig& agent_cfg,
                                        bool snapshot_nodes) {
    const long population = cfg.population;
    std::vector<AgentSeries> series(static_cast<std::size_t>(population));

    auto run_agent = [&](long index) {
        std::unique_ptr<Environment> env = make_environment(cfg);
        std::unique_ptr<Agent> agent = make_agent(agent_cfg, env->percept_count(),
                                                  env->action_count(),
                                                  derive_seed(cfg.master_seed, static_cast<std::uint64_t>(index)));
        AgentSeries& out = series[static_cast<std::size_t>(index)];
        out.metric.resize(static_cast<std::size_t>(cfg.trials));
        for (long t = 0; t < cfg.trials; ++t) {
            EpisodeStats ep = run_episode(*agent, *env);
            double metric;
            if (cfg.env == EnvKind::Gridworld) {
                bool capped = ep.reward == 0.0;
                metric = (capped && !cfg.cap_counts_as_length) ? std::nan("") :
                                                                 static_cast<double>(ep.steps);
            } else {
                metric = ep.reward;
            }
            out.metric[static_cast<std::size_t>(t)] = metric;
            agent->end_trial(t + 1);
        }
        if (snapshot_nodes) {
            if (const ClipMemory* clip = agent->clip(0)) {
                out.final_p_hat.resize(static_cast<std::size_t>(clip->topology().node_count()));
                for (int node = 0; node < clip->topology().node_count(); ++node)
                    out.final_p_hat[static_cast<std::size_t>(node)] =
                        clip->tree().upper_probability_at(node);
            }
        }
    };

    int workers = cfg.parallelism > 0 ? cfg.parallelism
                                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers == 1 || population == 1) {
        for (long i = 0; i < population; ++i) run_agent(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < population; i = next.fetch_add(1))
                    run_agent(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return series;
}

// Mean and population stddev over agents, trial by trial, in agent-index
// order. NaN entries (excluded capped episodes) are skipped.
void aggregate(const std::vector<AgentSeries>& series, std::vector<double>& mean,
               std::vector<double>& stddev) {
    const std::size_t trials = series.empty() ? 0 : series[0].metric.size();
    mean.assign(trials, 0.0);
    stddev.assign(trials, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        double sum = 0.0;
        long count = 0;
        for (const AgentSeries& s : series) {
            double v = s.metric[t];
            if (std::isnan(v)) continue;
            sum += v;
            ++count;
        }
        double m = count > 0 ? sum / static_cast<double>(count) : std::nan("");
        double var = 0.0;
        for (const AgentSeries& s : series) {
            double v = s.metric[t];
            if (std::isnan(v)) continue;
            var += (v - m) * (v - m);
        }
        mean[t] = m;
        stddev[t] = count > 0 ? std::sqrt(var / static_cast<double>(count)) : std::nan("");
    }
}

std::vector<double> mean_node_p_hat(const std::vector<AgentSeries>& series) {
    std::size_t nodes = 0;
    for (const AgentSeries& s : series) nodes = std::max(nodes, s.final_p_hat.size());
    std::vector<double> mean(nodes, 0.0);
    long count = 0;
    for (const AgentSeries& s : series) {
        if (s.final_p_hat.size() != nodes) continue;
        for (std::size_t i = 0; i < nodes; ++i) mean[i] += s.final_p_hat[i];
        ++count;
    }
    for (double& v : mean) v /= static_cast<double>(count > 0 ? count : 1);
    return mean;
}

double finite_mean(const std::vector<double>& values) {
    double sum = 0.0;
    long count = 0;
    for (double v : values)
        if (!std::isnan(v)) {
            sum += v;
            ++count;
        }
    return count > 0 ? sum / static_cast<double>(count) : std::nan("");
}

ExperimentResult shell_result(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.kind = to_string(cfg.kind);
    result.master_seed = cfg.master_seed;
    result.config_echo = config_to_json(cfg);
    return result;
}

ExperimentResult run_gridworld_learning(const ExperimentConfig& cfg) {
    ExperimentResult result = shell_result(cfg);
    std::vector<AgentSeries> series = run_population(cfg, cfg.agent, false);
    std::vector<double> mean, stddev;
    aggregate(series, mean, stddev);
    result.columns = {"trial", "mean_path_length", "stddev_path_length"};
    for (long t = 0; t < cfg.trials; ++t)
        result.rows.push_back({static_cast<double>(t + 1), mean[static_cast<std::size_t>(t)],
                               stddev[static_cast<std::size_t>(t)]});
    result.summary["min_path_length"] = min_path_length(cfg.grid);
    result.summary["final_mean_path_length"] = mean.back();
    result.summary["first_mean_path_length"] = mean.front();
    return result;
}

ExperimentResult run_gridworld_noise_compare(const ExperimentConfig& cfg) {
    ExperimentResult result = shell_result(cfg);
    AgentConfig ideal = cfg.agent;
    ideal.noise.sigma = 0.0;
    std::vector<AgentSeries> ideal_series = run_population(cfg, ideal, false);
    std::vector<AgentSeries> noisy_series = run_population(cfg, cfg.agent, false);
    std::vector<double> mean_ideal, sd_ideal, mean_noisy, sd_noisy;
    aggregate(ideal_series, mean_ideal, sd_ideal);
    aggregate(noisy_series, mean_noisy, sd_noisy);
    result.columns = {"trial", "mean_path_ideal", "mean_path_noisy", "stddev_path_ideal",
                      "stddev_path_noisy"};
    for (long t = 0; t < cfg.trials; ++t) {
        std::size_t i = static_cast<std::size_t>(t);
        result.rows.push_back(
            {static_cast<double>(t + 1), mean_ideal[i], mean_noisy[i], sd_ideal[i], sd_noisy[i]});
    }
    result.summary["min_path_length"] = min_path_length(cfg.grid);
    result.summary["sigma"] = cfg.agent.noise.sigma;
    result.summary["final_mean_path_ideal"] = mean_ideal.back();
    result.summary["final_mean_path_noisy"] = mean_noisy.back();
    return result;
}

ExperimentResult run_bandit_boost(const ExperimentConfig& cfg) {
    ExperimentResult result = shell_result(cfg);
    AgentConfig no_defrag = cfg.agent;
    no_defrag.defrag.period = 0;
    std::vector<AgentSeries> with = run_population(cfg, cfg.agent, false);
    std::vector<AgentSeries> without = run_population(cfg, no_defrag, false);
    std::vector<double> mean_with, sd_with, mean_without, sd_without;
    aggregate(with, mean_with, sd_with);
    aggregate(without, mean_without, sd_without);
    std::vector<double> boost = compute_boost(mean_with, mean_without);
    result.columns = {"trial", "mean_reward_defrag", "mean_reward_nodefrag", "boost"};
    for (long t = 0; t < cfg.trials; ++t) {
        std::size_t i = static_cast<std::size_t>(t);
        result.rows.push_back(
            {static_cast<double>(t + 1), mean_with[i], mean_without[i], boost[i]});
    }
    result.summary["mean_boost"] = finite_mean(boost);
    result.summary["rewarded_mode"] = cfg.flat.rewarded_mode;
    result.summary["d"] = cfg.flat.modes_exponent;
    return result;
}

ExperimentResult run_bandit_factorized(const ExperimentConfig& cfg) {
    ExperimentResult result = shell_result(cfg);
    std::vector<AgentSeries> series = run_population(cfg, cfg.agent, true);
    std::vector<double> mean, stddev;
    aggregate(series, mean, stddev);
    result.columns = {"trial", "mean_reward", "stddev_reward"};
    for (long t = 0; t < cfg.trials; ++t)
        result.rows.push_back({static_cast<double>(t + 1), mean[static_cast<std::size_t>(t)],
                               stddev[static_cast<std::size_t>(t)]});

    std::vector<double> p_hat = mean_node_p_hat(series);
    nlohmann::json nodes = nlohmann::json::object();
    if (!p_hat.empty()) {
        // Depth of the single-percept clip the population shares.
        int depth = 1;
        while (((1 << depth) - 1) < static_cast<int>(p_hat.size())) ++depth;
        TreeTopology topo(depth);
        for (int k = 1; k <= depth; ++k)
            for (int l = 1; l <= (1 << (k - 1)); ++l)
                nodes["k" + std::to_string(k) + "_l" + std::to_string(l)] =
                    p_hat[static_cast<std::size_t>(topo.node_index(k, l))];
    }
    result.summary["node_upper_probability"] = std::move(nodes);
    result.summary["x"] = cfg.factorized_x;
    result.summary["final_mean_reward"] = mean.back();
    return result;
}

ExperimentResult run_equivalence_suite(const ExperimentConfig& cfg) {
    ExperimentResult result = shell_result(cfg);
    std::vector<CheckResult> checks = run_verification_suites(cfg.master_seed);
    result.columns = {"trial", "pass", "observed", "bound"};
    nlohmann::json names = nlohmann::json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const CheckResult& c = checks[i];
        result.rows.push_back(
            {static_cast<double>(i + 1), c.pass ? 1.0 : 0.0, c.observed, c.bound});
        names.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all_pass = all_pass && c.pass;
    }
    result.summary["checks"] = std::move(names);
    result.summary["all_pass"] = all_pass;
    return result;
}

}  // namespace

EpisodeStats run_episode(Agent& agent, Environment& env) {
    EpisodeStats stats;
    int percept = env.reset();
    while (true) {
        int action = agent.act(percept);
        StepResult r = env.step(action);
        agent.learn(percept, action, r.reward, r.percept, r.done);
        ++stats.steps;
        stats.reward += r.reward;
        percept = r.percept;
        if (r.done) break;
    }
    return stats;
}

std::vector<double> compute_boost(const std::vector<double>& mean_reward_defrag,
                                  const std::vector<double>& mean_reward_nodefrag) {
    if (mean_reward_defrag.size() != mean_reward_nodefrag.size())
        throw std::invalid_argument("compute_boost: trial counts differ");
    std::vector<double> boost(mean_reward_defrag.size());
    for (std::size_t i = 0; i < boost.size(); ++i)
        boost[i] = mean_reward_defrag[i] - mean_reward_nodefrag[i];
    return boost;
}

int ExperimentResult::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("ExperimentResult: no column named '" + name + "'");
}

std::vector<double> ExperimentResult::column(const std::string& name) const {
    int idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const std::vector<double>& row : rows) out.push_back(row[static_cast<std::size_t>(idx)]);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    switch (cfg.kind) {
        case ExperimentKind::GridworldLearning: result = run_gridworld_learning(cfg); break;
        case ExperimentKind::GridworldNoiseCompare: result = run_gridworld_noise_compare(cfg); break;
        case ExperimentKind::BanditBoost: result = run_bandit_boost(cfg); break;
        case ExperimentKind::BanditFactorized: result = run_bandit_factorized(cfg); break;
        case ExperimentKind::EquivalenceSuite: result = run_equivalence_suite(cfg); break;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string result_csv_text(const ExperimentResult& result) {
    std::ostringstream out;
    for (std::size_t i = 0; i < result.columns.size(); ++i) {
        if (i) out << ',';
        out << result.columns[i];
    }
    out << '\n';
    for (const std::vector<double>& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json result_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["kind"] = result.kind;
    j["master_seed"] = result.master_seed;
    j["config"] = result.config_echo;
    j["summary"] = result.summary;
    j["columns"] = result.columns;
    j["trials"] = result.rows.size();
    j["wall_seconds"] = result.wall_seconds;
    return j;
}

void write_result_files(const ExperimentResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir + "/result.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + dir + "/result.csv");
        csv << result_csv_text(result);
    }
    {
        std::ofstream js(dir + "/result.json", std::ios::binary);
        if (!js) throw std::runtime_error("cannot write " + dir + "/result.json");
        js << result_json(result).dump(2) << '\n';
    }
}

}  // namespace photonrl
