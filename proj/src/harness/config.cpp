#include "photonrl/harness/config.hpp"

#include <set>
#include <stdexcept>

namespace photonrl {

namespace {

const TomlValue* find(const TomlTable& table, const std::string& section, const std::string& key) {
    auto sec = table.find(section);
    if (sec == table.end()) return nullptr;
    auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

void require_known_keys(const TomlTable& table, const std::string& section,
                        const std::set<std::string>& allowed) {
    auto sec = table.find(section);
    if (sec == table.end()) return;
    for (const auto& [key, value] : sec->second)
        if (!allowed.count(key))
            throw std::runtime_error("config: unknown key '" + key + "' in [" + section + "]");
}

Cell cell_from(const TomlValue& v, const std::string& where) {
    std::vector<long long> raw = v.as_int_array(where);
    if (raw.size() != 3)
        throw std::runtime_error("config: '" + where + "' must be a [x, y, z] triple");
    return Cell{static_cast<int>(raw[0]), static_cast<int>(raw[1]), static_cast<int>(raw[2])};
}

ExperimentKind kind_from(const std::string& name) {
    if (name == "gridworld-learning") return ExperimentKind::GridworldLearning;
    if (name == "gridworld-noise-compare") return ExperimentKind::GridworldNoiseCompare;
    if (name == "bandit-boost") return ExperimentKind::BanditBoost;
    if (name == "bandit-factorized") return ExperimentKind::BanditFactorized;
    if (name == "equivalence-suite") return ExperimentKind::EquivalenceSuite;
    throw std::runtime_error("config: unknown experiment kind '" + name + "'");
}

EnvKind env_from(const std::string& name) {
    if (name == "gridworld") return EnvKind::Gridworld;
    if (name == "bandit-flat") return EnvKind::BanditFlat;
    if (name == "bandit-factorized") return EnvKind::BanditFactorized;
    throw std::runtime_error("config: unknown environment type '" + name + "'");
}

AgentModel model_from(const std::string& name) {
    if (name == "tree-ps") return AgentModel::TreePs;
    if (name == "photonic-sarsa") return AgentModel::PhotonicSarsa;
    if (name == "photonic-ql") return AgentModel::PhotonicQl;
    if (name == "exact-standard") return AgentModel::ExactStandard;
    if (name == "exact-softmax") return AgentModel::ExactSoftmax;
    if (name == "oracle-2l-ps") return AgentModel::TwoLayerPs;
    if (name == "oracle-tabular") return AgentModel::Tabular;
    throw std::runtime_error("config: unknown agent model '" + name + "'");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::GridworldLearning: return "gridworld-learning";
        case ExperimentKind::GridworldNoiseCompare: return "gridworld-noise-compare";
        case ExperimentKind::BanditBoost: return "bandit-boost";
        case ExperimentKind::BanditFactorized: return "bandit-factorized";
        case ExperimentKind::EquivalenceSuite: return "equivalence-suite";
    }
    return "?";
}

std::string to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::Gridworld: return "gridworld";
        case EnvKind::BanditFlat: return "bandit-flat";
        case EnvKind::BanditFactorized: return "bandit-factorized";
    }
    return "?";
}

std::string to_string(AgentModel model) {
    switch (model) {
        case AgentModel::TreePs: return "tree-ps";
        case AgentModel::PhotonicSarsa: return "photonic-sarsa";
        case AgentModel::PhotonicQl: return "photonic-ql";
        case AgentModel::ExactStandard: return "exact-standard";
        case AgentModel::ExactSoftmax: return "exact-softmax";
        case AgentModel::TwoLayerPs: return "oracle-2l-ps";
        case AgentModel::Tabular: return "oracle-tabular";
    }
    return "?";
}

FactorizedBanditSpec ExperimentConfig::factorized_spec() const {
    FactorizedBanditSpec spec = factorized_preset(factorized_x, factorized_epsilon);
    spec.combine = factorized_combine;
    if (factorized_table1) spec.tables[0] = *factorized_table1;
    if (factorized_table2) spec.tables[1] = *factorized_table2;
    if (factorized_table3) spec.tables[2] = *factorized_table3;
    spec.validate();
    return spec;
}

void ExperimentConfig::validate() const {
    agent.validate();
    if (population < 1) throw std::runtime_error("config: experiment.agents must be >= 1");
    if (trials < 1) throw std::runtime_error("config: experiment.trials must be >= 1");
    if (parallelism < 0) throw std::runtime_error("config: experiment.parallel must be >= 0");
    if (population_full < 0) throw std::runtime_error("config: experiment.agents_full must be >= 0");

    switch (kind) {
        case ExperimentKind::GridworldLearning:
        case ExperimentKind::GridworldNoiseCompare:
            if (env != EnvKind::Gridworld)
                throw std::runtime_error("config: " + to_string(kind) +
                                         " requires environment.type = \"gridworld\"");
            grid.validate();
            break;
        case ExperimentKind::BanditBoost:
            if (env != EnvKind::BanditFlat)
                throw std::runtime_error("config: bandit-boost requires environment.type = \"bandit-flat\"");
            flat.validate();
            if (!agent.defrag.enabled())
                throw std::runtime_error("config: bandit-boost requires defrag.period >= 1");
            break;
        case ExperimentKind::BanditFactorized:
            if (env != EnvKind::BanditFactorized)
                throw std::runtime_error(
                    "config: bandit-factorized requires environment.type = \"bandit-factorized\"");
            factorized_spec();
            break;
        case ExperimentKind::EquivalenceSuite:
            break;
    }
}

ExperimentConfig config_from_toml(const TomlTable& table) {
    for (const auto& [section, keys] : table) {
        (void)keys;
        if (section != "experiment" && section != "agent" && section != "environment" &&
            section != "noise" && section != "defrag")
            throw std::runtime_error("config: unknown section [" + section + "]");
    }

    ExperimentConfig cfg;

    // ---- [experiment] -------------------------------------------------
    require_known_keys(table, "experiment",
                       {"kind", "agents", "trials", "seed", "parallel", "out",
                        "cap_counts_as_length", "agents_full"});
    if (const TomlValue* v = find(table, "experiment", "kind"))
        cfg.kind = kind_from(v->as_string("experiment.kind"));
    if (const TomlValue* v = find(table, "experiment", "agents"))
        cfg.population = v->as_int("experiment.agents");
    if (const TomlValue* v = find(table, "experiment", "agents_full"))
        cfg.population_full = v->as_int("experiment.agents_full");
    if (const TomlValue* v = find(table, "experiment", "trials"))
        cfg.trials = v->as_int("experiment.trials");
    if (const TomlValue* v = find(table, "experiment", "seed"))
        cfg.master_seed = static_cast<std::uint64_t>(v->as_int("experiment.seed"));
    if (const TomlValue* v = find(table, "experiment", "parallel"))
        cfg.parallelism = static_cast<int>(v->as_int("experiment.parallel"));
    if (const TomlValue* v = find(table, "experiment", "out"))
        cfg.out_dir = v->as_string("experiment.out");
    if (const TomlValue* v = find(table, "experiment", "cap_counts_as_length"))
        cfg.cap_counts_as_length = v->as_bool("experiment.cap_counts_as_length");

    // ---- [agent] --------------------------------------------------------
    require_known_keys(table, "agent",
                       {"model", "reward", "glow", "damping", "damping_period", "alpha", "beta",
                        "policy", "tabular_mode", "reset_glow_each_trial"});
    if (const TomlValue* v = find(table, "agent", "model"))
        cfg.agent.model = model_from(v->as_string("agent.model"));
    if (const TomlValue* v = find(table, "agent", "reward"))
        cfg.agent.reward = v->as_double("agent.reward");
    if (const TomlValue* v = find(table, "agent", "glow"))
        cfg.agent.glow_eta = v->as_double("agent.glow");
    if (const TomlValue* v = find(table, "agent", "damping"))
        cfg.agent.damping_gamma = v->as_double("agent.damping");
    if (const TomlValue* v = find(table, "agent", "damping_period"))
        cfg.agent.damping_period = v->as_int("agent.damping_period");
    if (const TomlValue* v = find(table, "agent", "alpha"))
        cfg.agent.alpha = v->as_double("agent.alpha");
    if (const TomlValue* v = find(table, "agent", "beta"))
        cfg.agent.beta = v->as_double("agent.beta");
    if (const TomlValue* v = find(table, "agent", "policy")) {
        const std::string& p = v->as_string("agent.policy");
        if (p == "normalized-h")
            cfg.agent.oracle_policy = PolicyMode::NormalizedH;
        else if (p == "softmax")
            cfg.agent.oracle_policy = PolicyMode::Softmax;
        else
            throw std::runtime_error("config: agent.policy must be \"normalized-h\" or \"softmax\"");
    }
    if (const TomlValue* v = find(table, "agent", "tabular_mode")) {
        const std::string& m = v->as_string("agent.tabular_mode");
        if (m == "sarsa")
            cfg.agent.tabular_mode = TabularMode::Sarsa;
        else if (m == "ql")
            cfg.agent.tabular_mode = TabularMode::QLearning;
        else
            throw std::runtime_error("config: agent.tabular_mode must be \"sarsa\" or \"ql\"");
    }
    if (const TomlValue* v = find(table, "agent", "reset_glow_each_trial"))
        cfg.agent.reset_glow_each_trial = v->as_bool("agent.reset_glow_each_trial");

    // ---- [noise] --------------------------------------------------------
    require_known_keys(table, "noise", {"sigma", "mode"});
    if (const TomlValue* v = find(table, "noise", "sigma"))
        cfg.agent.noise.sigma = v->as_double("noise.sigma");
    if (const TomlValue* v = find(table, "noise", "mode")) {
        const std::string& m = v->as_string("noise.mode");
        if (m == "per-adjustment")
            cfg.agent.noise.mode = NoiseMode::PerAdjustment;
        else if (m == "per-shot")
            cfg.agent.noise.mode = NoiseMode::PerShot;
        else
            throw std::runtime_error("config: noise.mode must be \"per-adjustment\" or \"per-shot\"");
    }

    // ---- [defrag] ---------------------------------------------------------
    require_known_keys(table, "defrag", {"period"});
    if (const TomlValue* v = find(table, "defrag", "period"))
        cfg.agent.defrag.period = v->as_int("defrag.period");

    // ---- [environment] ----------------------------------------------------
    require_known_keys(table, "environment",
                       {"type", "size", "start", "goal", "episode_cap", "walls", "wall_density",
                        "wall_seed", "d", "rewarded_mode", "x", "epsilon", "combine",
                        "lambda1", "lambda2", "lambda3"});
    if (const TomlValue* v = find(table, "environment", "type"))
        cfg.env = env_from(v->as_string("environment.type"));

    if (cfg.env == EnvKind::Gridworld) {
        if (const TomlValue* v = find(table, "environment", "size")) {
            std::vector<long long> s = v->as_int_array("environment.size");
            if (s.size() != 3) throw std::runtime_error("config: environment.size must be [X, Y, Z]");
            cfg.grid.size_x = static_cast<int>(s[0]);
            cfg.grid.size_y = static_cast<int>(s[1]);
            cfg.grid.size_z = static_cast<int>(s[2]);
        }
        if (const TomlValue* v = find(table, "environment", "start"))
            cfg.grid.start = cell_from(*v, "environment.start");
        if (const TomlValue* v = find(table, "environment", "goal"))
            cfg.grid.goal = cell_from(*v, "environment.goal");
        if (const TomlValue* v = find(table, "environment", "episode_cap"))
            cfg.grid.episode_cap = v->as_int("environment.episode_cap");
        if (const TomlValue* v = find(table, "environment", "walls"))
            for (const TomlValue& w : v->as_array("environment.walls"))
                cfg.grid.walls.insert(cell_from(w, "environment.walls[]"));
        cfg.grid.reward = cfg.agent.reward;
        double density = 0.0;
        std::uint64_t wall_seed = 1;
        if (const TomlValue* v = find(table, "environment", "wall_density"))
            density = v->as_double("environment.wall_density");
        if (const TomlValue* v = find(table, "environment", "wall_seed"))
            wall_seed = static_cast<std::uint64_t>(v->as_int("environment.wall_seed"));
        if (density > 0.0) {
            std::set<Cell> extra = random_walls(cfg.grid, density, wall_seed);
            cfg.grid.walls.insert(extra.begin(), extra.end());
        }
    } else if (cfg.env == EnvKind::BanditFlat) {
        if (const TomlValue* v = find(table, "environment", "d"))
            cfg.flat.modes_exponent = static_cast<int>(v->as_int("environment.d"));
        if (const TomlValue* v = find(table, "environment", "rewarded_mode"))
            cfg.flat.rewarded_mode = static_cast<int>(v->as_int("environment.rewarded_mode"));
        cfg.flat.reward = cfg.agent.reward;
    } else {
        if (const TomlValue* v = find(table, "environment", "x"))
            cfg.factorized_x = v->as_double("environment.x");
        if (const TomlValue* v = find(table, "environment", "epsilon"))
            cfg.factorized_epsilon = v->as_double("environment.epsilon");
        if (const TomlValue* v = find(table, "environment", "combine")) {
            const std::string& cmb = v->as_string("environment.combine");
            if (cmb == "sum")
                cfg.factorized_combine = FactorizedBanditSpec::Combine::Sum;
            else if (cmb == "product")
                cfg.factorized_combine = FactorizedBanditSpec::Combine::Product;
            else
                throw std::runtime_error("config: environment.combine must be \"sum\" or \"product\"");
        }
        if (const TomlValue* v = find(table, "environment", "lambda1"))
            cfg.factorized_table1 = v->as_double_array("environment.lambda1");
        if (const TomlValue* v = find(table, "environment", "lambda2"))
            cfg.factorized_table2 = v->as_double_array("environment.lambda2");
        if (const TomlValue* v = find(table, "environment", "lambda3"))
            cfg.factorized_table3 = v->as_double_array("environment.lambda3");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_toml(parse_toml_file(path));
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = {
        {"kind", to_string(cfg.kind)},
        {"agents", cfg.population},
        {"trials", cfg.trials},
        {"seed", cfg.master_seed},
        {"parallel", cfg.parallelism},
        {"out", cfg.out_dir},
        {"cap_counts_as_length", cfg.cap_counts_as_length},
    };
    j["agent"] = {
        {"model", to_string(cfg.agent.model)},
        {"reward", cfg.agent.reward},
        {"glow", cfg.agent.glow_eta},
        {"damping", cfg.agent.damping_gamma},
        {"damping_period", cfg.agent.damping_period},
        {"alpha", cfg.agent.alpha},
        {"beta", cfg.agent.beta},
        {"reset_glow_each_trial", cfg.agent.reset_glow_each_trial},
    };
    j["noise"] = {
        {"sigma", cfg.agent.noise.sigma},
        {"mode", cfg.agent.noise.mode == NoiseMode::PerAdjustment ? "per-adjustment" : "per-shot"},
    };
    j["defrag"] = {{"period", cfg.agent.defrag.period}};
    nlohmann::json env;
    env["type"] = to_string(cfg.env);
    if (cfg.env == EnvKind::Gridworld) {
        env["size"] = {cfg.grid.size_x, cfg.grid.size_y, cfg.grid.size_z};
        env["start"] = cfg.grid.start;
        env["goal"] = cfg.grid.goal;
        env["episode_cap"] = cfg.grid.episode_cap;
        env["reward"] = cfg.grid.reward;
        env["wall_count"] = cfg.grid.walls.size();
    } else if (cfg.env == EnvKind::BanditFlat) {
        env["d"] = cfg.flat.modes_exponent;
        env["rewarded_mode"] = cfg.flat.rewarded_mode;
        env["reward"] = cfg.flat.reward;
    } else {
        env["x"] = cfg.factorized_x;
        env["epsilon"] = cfg.factorized_epsilon;
        env["combine"] =
            cfg.factorized_combine == FactorizedBanditSpec::Combine::Sum ? "sum" : "product";
        env["tables"] = cfg.factorized_spec().tables;
    }
    j["environment"] = std::move(env);
    return j;
}

}  // namespace photonrl
