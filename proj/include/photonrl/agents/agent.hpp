#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "photonrl/agents/clip_memory.hpp"
#include "photonrl/agents/tabular.hpp"
#include "photonrl/agents/two_layer_oracle.hpp"
#include "photonrl/memops/defrag.hpp"
#include "photonrl/mesh/noise.hpp"

namespace photonrl {

enum class AgentModel {
    TreePs,          // chi-tree with glow and periodic damping
    PhotonicSarsa,   // chi-tree, confidence-driven blend updates
    PhotonicQl,      // same with the peakedness-weighted target
    ExactStandard,   // xi-tree reproducing normalized-h two-layer memory
    ExactSoftmax,    // xi-tree reproducing softmax-of-h two-layer memory
    TwoLayerPs,      // reference two-layer memory
    Tabular,         // reference tabular SARSA / Q-learning
};

struct AgentConfig {
    AgentModel model = AgentModel::TreePs;
    double reward = 1.0;          // lambda the environment issues on success
    double glow_eta = 0.11;       // eta
    double damping_gamma = 1.0;   // multiplicative retention; 1 = no damping
    long damping_period = 100;    // steps between damping applications
    double alpha = 0.1;           // learning rate (SARSA/QL/tabular)
    double beta = 1.0;            // softmax exploration drive
    NoiseSpec noise;
    DefragPolicy defrag;          // period in trials; 0 = off
    bool reset_glow_each_trial = false;
    PolicyMode oracle_policy = PolicyMode::NormalizedH;  // two-layer model only
    TabularMode tabular_mode = TabularMode::Sarsa;       // tabular model only

    void validate() const {
        if (!(reward >= 0.0)) throw std::invalid_argument("AgentConfig: reward must be >= 0");
        if (glow_eta < 0.0 || glow_eta > 1.0)
            throw std::invalid_argument("AgentConfig: glow must be in [0, 1]");
        if (damping_gamma < 0.0 || damping_gamma > 1.0)
            throw std::invalid_argument("AgentConfig: damping must be in [0, 1]");
        if (damping_period < 1)
            throw std::invalid_argument("AgentConfig: damping_period must be >= 1");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("AgentConfig: alpha must be in (0, 1]");
        if (!(beta >= 0.0)) throw std::invalid_argument("AgentConfig: beta must be >= 0");
        noise.validate();
        defrag.validate();
    }
};

// One learning agent: selects actions from percepts and updates its memory
// from the observed transition. Instances own their generator and are
// single-threaded; the harness runs one agent per task.
class Agent {
public:
    virtual ~Agent() = default;

    // Chooses (and internally commits to) an action for `percept`.
    virtual int act(int percept) = 0;

    // Consumes the transition produced by the environment. Called once per
    // interaction step, directly after act().
    virtual void learn(int percept, int action, double reward, int next_percept, bool done) = 0;

    // Hook run after each finished trial (1-based index): defragmentation
    // cadence and per-trial housekeeping.
    virtual void end_trial(long trial) = 0;

    // Tree memory of a percept, when the model has one (else nullptr).
    virtual const ClipMemory* clip(int /*percept*/) const { return nullptr; }
};

std::unique_ptr<Agent> make_agent(const AgentConfig& config, int percept_count, int action_count,
                                  std::uint64_t seed);

}  // namespace photonrl
