#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "photonrl/agents/policy.hpp"

namespace photonrl {

enum class TabularMode { Sarsa, QLearning };

// Reference tabular Q-values with the one-step update
//   Q_{s,a} <- (1 - alpha) Q_{s,a} + alpha (lambda + gamma f(Q_{s'}))
// where f reads the next pair's value (SARSA) or the next state's maximum
// (Q-learning). Rows are created lazily and initialized to zero.
class TabularQ {
public:
    explicit TabularQ(int action_count) : action_count_(action_count) {
        if (action_count < 1) throw std::invalid_argument("TabularQ: need at least one action");
    }

    int action_count() const { return action_count_; }

    double q(int state, int action) const {
        check_action(action);
        auto it = table_.find(state);
        return it == table_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
    }

    const std::vector<double>& row(int state) {
        auto [it, inserted] = table_.try_emplace(state);
        if (inserted) it->second.assign(static_cast<std::size_t>(action_count_), 0.0);
        return it->second;
    }

    double max_q(int state) const {
        auto it = table_.find(state);
        if (it == table_.end()) return 0.0;
        double best = it->second[0];
        for (double v : it->second)
            if (v > best) best = v;
        return best;
    }

    // `next_action` is consulted only in SARSA mode; `terminal` zeroes the
    // bootstrap term.
    void update(int state, int action, double lambda, int next_state, int next_action, double alpha,
                double gamma, TabularMode mode, bool terminal = false) {
        check_action(action);
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("TabularQ: alpha in [0, 1]");
        if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("TabularQ: gamma in [0, 1]");
        double f = 0.0;
        if (!terminal)
            f = (mode == TabularMode::Sarsa) ? q(next_state, next_action) : max_q(next_state);
        auto [it, inserted] = table_.try_emplace(state);
        if (inserted) it->second.assign(static_cast<std::size_t>(action_count_), 0.0);
        double& cell = it->second[static_cast<std::size_t>(action)];
        cell = (1.0 - alpha) * cell + alpha * (lambda + gamma * f);
    }

    // Diagnostic expected value V_s = sum_j pi_{j|s} Q_{s,j} under the
    // softmax policy.
    double value(int state, double beta) const {
        auto it = table_.find(state);
        if (it == table_.end()) return 0.0;
        std::vector<double> pi = softmax_policy(it->second, beta);
        double v = 0.0;
        for (std::size_t j = 0; j < pi.size(); ++j) v += pi[j] * it->second[j];
        return v;
    }

    std::vector<double> policy(int state, double beta) {
        return softmax_policy(row(state), beta);
    }

private:
    void check_action(int action) const {
        if (action < 0 || action >= action_count_)
            throw std::out_of_range("TabularQ: action out of range");
    }

    int action_count_;
    std::unordered_map<int, std::vector<double>> table_;
};

}  // namespace photonrl
