#include "photonrl/agents/agent.hpp"

#include <optional>
#include <vector>

#include "photonrl/agents/exact_xi_tree.hpp"
#include "photonrl/rng.hpp"

namespace photonrl {

namespace {

int tree_depth_for(int action_count) {
    int depth = 1;
    while ((1 << depth) < action_count) ++depth;
    return depth;
}

// Shared plumbing for the chi-tree models: lazily created per-percept clips
// and a registry of the ones touched so far.
class ClipBank {
public:
    ClipBank(int percept_count, int action_count)
        : clips_(static_cast<std::size_t>(percept_count)), action_count_(action_count) {}

    ClipMemory& ensure(int percept) {
        auto& slot = clips_.at(static_cast<std::size_t>(percept));
        if (!slot) {
            slot = std::make_unique<ClipMemory>(action_count_);
            touched_.push_back(percept);
        }
        return *slot;
    }

    const ClipMemory* peek(int percept) const {
        return clips_.at(static_cast<std::size_t>(percept)).get();
    }

    const std::vector<int>& touched() const { return touched_; }

private:
    std::vector<std::unique_ptr<ClipMemory>> clips_;
    std::vector<int> touched_;
    int action_count_;
};

// ---------------------------------------------------------------------------
// tree-PS
// ---------------------------------------------------------------------------

class TreePsAgent final : public Agent {
public:
    TreePsAgent(const AgentConfig& cfg, int percept_count, int action_count, std::uint64_t seed)
        : cfg_(cfg),
          rng_(seed),
          bank_(percept_count, action_count),
          glow_powers_(cfg.glow_eta) {}

    int act(int percept) override {
        ClipMemory& clip = bank_.ensure(percept);
        int action = clip.sample_action(rng_, cfg_.noise);
        clip.traverse_glow(clip.leaf_of_action(action), step_);
        return action;
    }

    void learn(int percept, int action, double reward, int /*next_percept*/,
               bool /*done*/) override {
        if (reward != 0.0) {
            for (int id : bank_.touched())
                bank_.ensure(id).apply_reward_lazy(reward, step_, glow_powers_);
            bank_.ensure(percept).record_reward(action, reward);
        }
        ++step_;
        if (cfg_.damping_gamma < 1.0 && step_ % cfg_.damping_period == 0)
            for (int id : bank_.touched()) bank_.ensure(id).apply_damping(cfg_.damping_gamma);
    }

    void end_trial(long trial) override {
        if (cfg_.reset_glow_each_trial)
            for (int id : bank_.touched()) bank_.ensure(id).reset_glow();
        if (cfg_.defrag.enabled() && trial % cfg_.defrag.period == 0)
            for (int id : bank_.touched()) defragment(bank_.ensure(id), cfg_.defrag);
    }

    const ClipMemory* clip(int percept) const override { return bank_.peek(percept); }

private:
    AgentConfig cfg_;
    Rng rng_;
    ClipBank bank_;
    GlowTable glow_powers_;
    std::int64_t step_ = 0;
};

// ---------------------------------------------------------------------------
// photonic SARSA / Q-learning
// ---------------------------------------------------------------------------

class PhotonicTdAgent final : public Agent {
public:
    PhotonicTdAgent(const AgentConfig& cfg, int percept_count, int action_count,
                    std::uint64_t seed, bool q_learning)
        : cfg_(cfg), rng_(seed), bank_(percept_count, action_count), q_learning_(q_learning) {}

    int act(int percept) override {
        return bank_.ensure(percept).sample_action(rng_, cfg_.noise);
    }

    void learn(int percept, int action, double reward, int next_percept, bool done) override {
        ClipMemory& clip = bank_.ensure(percept);
        // Confidence and peakedness of an unvisited or terminal next clip are
        // their initial values (0), so the bootstrap term vanishes naturally.
        const ClipMemory* next = done ? nullptr : bank_.peek(next_percept);
        double r_next = next ? next->confidence() : 0.0;
        int leaf = clip.leaf_of_action(action);
        if (q_learning_) {
            double m_next = next ? next->peakedness() : 0.0;
            qlearning_update(clip, leaf, reward, r_next, m_next, cfg_.alpha, cfg_.damping_gamma);
        } else {
            sarsa_update(clip, leaf, reward, r_next, cfg_.alpha, cfg_.damping_gamma);
        }
        if (reward != 0.0) clip.record_reward(action, reward);
    }

    void end_trial(long trial) override {
        if (cfg_.defrag.enabled() && trial % cfg_.defrag.period == 0)
            for (int id : bank_.touched()) defragment(bank_.ensure(id), cfg_.defrag);
    }

    const ClipMemory* clip(int percept) const override { return bank_.peek(percept); }

private:
    AgentConfig cfg_;
    Rng rng_;
    ClipBank bank_;
    bool q_learning_;
};

// ---------------------------------------------------------------------------
// exact xi-tree models
// ---------------------------------------------------------------------------

class ExactXiAgent final : public Agent {
public:
    ExactXiAgent(const AgentConfig& cfg, int percept_count, int action_count, std::uint64_t seed,
                 bool softmax)
        : cfg_(cfg),
          rng_(seed),
          trees_(static_cast<std::size_t>(percept_count)),
          action_count_(action_count),
          softmax_(softmax) {}

    int act(int percept) override {
        ExactXiTree& tree = ensure(percept);
        // Walk the derived branch probabilities; leaves past the action count
        // (power-of-two padding) are re-injected like unassigned modes.
        constexpr int kMaxReinjections = 64;
        for (int attempt = 0; attempt <= kMaxReinjections; ++attempt) {
            int node = 0;
            int leaf0 = 0;
            for (int k = 1; k <= tree.depth(); ++k) {
                double up = tree.upper_probability_at(node);
                int digit = (rng_.uniform01() < up) ? 0 : 1;
                leaf0 = 2 * leaf0 + digit;
                node = 2 * node + 1 + digit;
            }
            if (leaf0 < action_count_) return leaf0;
        }
        throw std::runtime_error("ExactXiAgent: exceeded 64 re-injections on padded leaves");
    }

    void learn(int percept, int action, double reward, int /*next_percept*/,
               bool /*done*/) override {
        if (reward > 0.0) ensure(percept).reward(action + 1, reward);
    }

    void end_trial(long /*trial*/) override {}

private:
    ExactXiTree& ensure(int percept) {
        auto& slot = trees_.at(static_cast<std::size_t>(percept));
        if (!slot) {
            int depth = tree_depth_for(action_count_);
            slot = std::make_unique<ExactXiTree>(softmax_ ? ExactXiTree::softmax(depth, cfg_.beta)
                                                          : ExactXiTree::standard(depth));
        }
        return *slot;
    }

    AgentConfig cfg_;
    Rng rng_;
    std::vector<std::unique_ptr<ExactXiTree>> trees_;
    int action_count_;
    bool softmax_;
};

// ---------------------------------------------------------------------------
// reference two-layer memory
// ---------------------------------------------------------------------------

class TwoLayerPsAgent final : public Agent {
public:
    TwoLayerPsAgent(const AgentConfig& cfg, int percept_count, int action_count,
                    std::uint64_t seed)
        : cfg_(cfg),
          rng_(seed),
          oracles_(static_cast<std::size_t>(percept_count)),
          action_count_(action_count) {}

    int act(int percept) override {
        TwoLayerOracle& oracle = ensure(percept);
        std::vector<double> pi = oracle.policy();
        double u = rng_.uniform01();
        double acc = 0.0;
        for (int a = 0; a < action_count_; ++a) {
            acc += pi[static_cast<std::size_t>(a)];
            if (u < acc) {
                oracle.set_glow(a);
                return a;
            }
        }
        oracle.set_glow(action_count_ - 1);
        return action_count_ - 1;
    }

    void learn(int /*percept*/, int /*action*/, double reward, int /*next_percept*/,
               bool /*done*/) override {
        for (int id : touched_) {
            TwoLayerOracle& oracle = *oracles_[static_cast<std::size_t>(id)];
            if (reward != 0.0) oracle.apply_reward(reward);
            oracle.decay_glow(cfg_.glow_eta);
        }
        ++step_;
        // Config damping is the multiplicative retention of (h - 1):
        // h <- 1 + gamma (h - 1), i.e. the oracle's damp() with 1 - gamma.
        if (cfg_.damping_gamma < 1.0 && step_ % cfg_.damping_period == 0)
            for (int id : touched_)
                oracles_[static_cast<std::size_t>(id)]->damp(1.0 - cfg_.damping_gamma);
    }

    void end_trial(long /*trial*/) override {}

private:
    TwoLayerOracle& ensure(int percept) {
        auto& slot = oracles_.at(static_cast<std::size_t>(percept));
        if (!slot) {
            slot = std::make_unique<TwoLayerOracle>(action_count_, cfg_.oracle_policy, cfg_.beta);
            touched_.push_back(percept);
        }
        return *slot;
    }

    AgentConfig cfg_;
    Rng rng_;
    std::vector<std::unique_ptr<TwoLayerOracle>> oracles_;
    std::vector<int> touched_;
    int action_count_;
    std::int64_t step_ = 0;
};

// ---------------------------------------------------------------------------
// reference tabular SARSA / Q-learning
// ---------------------------------------------------------------------------

class TabularAgent final : public Agent {
public:
    TabularAgent(const AgentConfig& cfg, int /*percept_count*/, int action_count,
                 std::uint64_t seed)
        : cfg_(cfg), rng_(seed), table_(action_count) {}

    int act(int percept) override {
        std::vector<double> pi = table_.policy(percept, cfg_.beta);
        double u = rng_.uniform01();
        double acc = 0.0;
        int chosen = table_.action_count() - 1;
        for (int a = 0; a < table_.action_count(); ++a) {
            acc += pi[static_cast<std::size_t>(a)];
            if (u < acc) {
                chosen = a;
                break;
            }
        }
        // SARSA waits for the next on-policy action before committing the
        // previous transition.
        if (cfg_.tabular_mode == TabularMode::Sarsa && pending_) {
            table_.update(pending_->state, pending_->action, pending_->reward, percept, chosen,
                          cfg_.alpha, cfg_.damping_gamma, TabularMode::Sarsa, false);
            pending_.reset();
        }
        return chosen;
    }

    void learn(int percept, int action, double reward, int next_percept, bool done) override {
        if (cfg_.tabular_mode == TabularMode::QLearning) {
            table_.update(percept, action, reward, next_percept, -1, cfg_.alpha,
                          cfg_.damping_gamma, TabularMode::QLearning, done);
            return;
        }
        if (done) {
            table_.update(percept, action, reward, next_percept, -1, cfg_.alpha,
                          cfg_.damping_gamma, TabularMode::Sarsa, true);
            pending_.reset();
        } else {
            pending_ = Pending{percept, action, reward};
        }
    }

    void end_trial(long /*trial*/) override { pending_.reset(); }

private:
    struct Pending {
        int state;
        int action;
        double reward;
    };

    AgentConfig cfg_;
    Rng rng_;
    TabularQ table_;
    std::optional<Pending> pending_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentConfig& config, int percept_count, int action_count,
                                  std::uint64_t seed) {
    config.validate();
    if (percept_count < 1) throw std::invalid_argument("make_agent: percept_count must be >= 1");
    if (action_count < 1) throw std::invalid_argument("make_agent: action_count must be >= 1");
    switch (config.model) {
        case AgentModel::TreePs:
            return std::make_unique<TreePsAgent>(config, percept_count, action_count, seed);
        case AgentModel::PhotonicSarsa:
            return std::make_unique<PhotonicTdAgent>(config, percept_count, action_count, seed,
                                                     false);
        case AgentModel::PhotonicQl:
            return std::make_unique<PhotonicTdAgent>(config, percept_count, action_count, seed,
                                                     true);
        case AgentModel::ExactStandard:
            return std::make_unique<ExactXiAgent>(config, percept_count, action_count, seed, false);
        case AgentModel::ExactSoftmax:
            return std::make_unique<ExactXiAgent>(config, percept_count, action_count, seed, true);
        case AgentModel::TwoLayerPs:
            return std::make_unique<TwoLayerPsAgent>(config, percept_count, action_count, seed);
        case AgentModel::Tabular:
            return std::make_unique<TabularAgent>(config, percept_count, action_count, seed);
    }
    throw std::invalid_argument("make_agent: unknown model");
}

}  // namespace photonrl
