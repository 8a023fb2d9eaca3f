// photon-rl: config-driven experiment runner.
//
//   photon-rl run <config.toml> [--out DIR] [--seed N] [--agents N]
//                 [--trials N] [--parallel N] [--full-scale]
//   photon-rl verify [--seed N]
//   photon-rl sweep --param section.key --values v1,v2,... <config.toml> [...]
//
// Outputs: result.csv (one row per trial) and result.json (config echo,
// seeds, summary) in the output directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photonrl/harness/checks.hpp"
#include "photonrl/harness/config.hpp"
#include "photonrl/harness/experiment.hpp"
#include "photonrl/harness/toml.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> agents;
    std::optional<long> trials;
    std::optional<int> parallel;
    std::optional<std::string> out;
    bool full_scale = false;
};

photonrl::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& over) {
    photonrl::ExperimentConfig cfg = photonrl::load_config(path);
    if (over.seed) cfg.master_seed = *over.seed;
    if (over.agents) cfg.population = *over.agents;
    if (over.trials) cfg.trials = *over.trials;
    if (over.parallel) cfg.parallelism = *over.parallel;
    if (over.out) cfg.out_dir = *over.out;
    if (over.full_scale) {
        cfg.population = cfg.population_full > 0 ? cfg.population_full : cfg.population * 10;
    }
    cfg.validate();
    return cfg;
}

int run_one(const photonrl::ExperimentConfig& cfg, const std::string& dir) {
    photonrl::ExperimentResult result = photonrl::run_experiment(cfg);
    photonrl::write_result_files(result, dir);
    std::cout << result.kind << ": " << result.rows.size() << " trials, "
              << cfg.population << " agents, seed " << cfg.master_seed << " -> " << dir
              << "/result.csv (" << result.wall_seconds << " s)\n";
    if (result.summary.contains("all_pass") && !result.summary["all_pass"].get<bool>()) {
        std::cerr << "verification checks failed; see " << dir << "/result.json\n";
        return 1;
    }
    return 0;
}

int cmd_verify(std::uint64_t seed) {
    std::vector<photonrl::CheckResult> checks = photonrl::run_verification_suites(seed);
    bool all = true;
    for (const photonrl::CheckResult& c : checks) {
        std::printf("[%s] %-26s observed %.3e  bound %.1e  %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.observed, c.bound, c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
    return all ? 0 : 1;
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

// Applies "--param section.key = raw" on top of the loaded TOML text by
// re-parsing with the key replaced, keeping full schema validation.
photonrl::ExperimentConfig patched_config(const std::string& path, const std::string& param,
                                          const std::string& raw, const Overrides& over) {
    auto dot = param.find('.');
    if (dot == std::string::npos)
        throw std::runtime_error("sweep: --param must look like section.key");
    std::string section = param.substr(0, dot);
    std::string key = param.substr(dot + 1);

    photonrl::TomlTable table = photonrl::parse_toml_file(path);
    std::string patch = "[" + section + "]\n" + key + " = " + raw + "\n";
    photonrl::TomlTable patched = photonrl::parse_toml(patch, "<sweep>");
    table[section][key] = patched[section][key];

    photonrl::ExperimentConfig cfg = photonrl::config_from_toml(table);
    if (over.seed) cfg.master_seed = *over.seed;
    if (over.agents) cfg.population = *over.agents;
    if (over.trials) cfg.trials = *over.trials;
    if (over.parallel) cfg.parallelism = *over.parallel;
    if (over.out) cfg.out_dir = *over.out;
    if (over.full_scale)
        cfg.population = cfg.population_full > 0 ? cfg.population_full : cfg.population * 10;
    cfg.validate();
    return cfg;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values_csv,
              const Overrides& over) {
    std::vector<std::string> values = split_values(values_csv);
    if (values.empty()) throw std::runtime_error("sweep: --values is empty");

    std::string base_dir;
    {
        photonrl::ExperimentConfig probe = patched_config(path, param, values[0], over);
        base_dir = probe.out_dir;
    }
    std::filesystem::create_directories(base_dir);
    std::ofstream summary(base_dir + "/sweep_summary.csv", std::ios::binary);
    bool header_written = false;

    for (const std::string& raw : values) {
        photonrl::ExperimentConfig cfg = patched_config(path, param, raw, over);
        std::string dir = base_dir + "/" + param + "=" + raw;
        photonrl::ExperimentResult result = photonrl::run_experiment(cfg);
        photonrl::write_result_files(result, dir);
        if (!header_written) {
            summary << "value";
            for (const std::string& c : result.columns) summary << ',' << "final_" << c;
            summary << '\n';
            header_written = true;
        }
        summary << raw;
        for (double v : result.rows.back()) summary << ',' << photonrl::format_double(v);
        summary << '\n';
        std::cout << param << " = " << raw << " -> " << dir << "/result.csv\n";
    }
    std::cout << "sweep summary -> " << base_dir << "/sweep_summary.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photonic reinforcement-learning experiment runner"};
    app.require_subcommand(1);

    Overrides over;
    std::string config_path;
    std::string sweep_param;
    std::string sweep_values;
    std::uint64_t verify_seed = 1;

    auto add_overrides = [&over](CLI::App* cmd) {
        cmd->add_option("--seed", over.seed, "master seed override");
        cmd->add_option("--agents", over.agents, "population size override");
        cmd->add_option("--trials", over.trials, "trial count override");
        cmd->add_option("--parallel", over.parallel, "worker threads (0 = hardware)");
        cmd->add_option("--out", over.out, "output directory override");
        cmd->add_flag("--full-scale", over.full_scale,
                      "use the full-scale population (agents_full, default 10x)");
    };

    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "TOML config file")->required();
    add_overrides(run);

    CLI::App* verify = app.add_subcommand("verify", "run the equivalence and property suites");
    verify->add_option("--seed", verify_seed, "seed for the randomized checks");

    CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    sweep->add_option("--param", sweep_param, "config key to vary, e.g. noise.sigma")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("config", config_path, "TOML config file")->required();
    add_overrides(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            photonrl::ExperimentConfig cfg = load_with_overrides(config_path, over);
            return run_one(cfg, cfg.out_dir);
        }
        if (verify->parsed()) return cmd_verify(verify_seed);
        if (sweep->parsed()) return cmd_sweep(config_path, sweep_param, sweep_values, over);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
