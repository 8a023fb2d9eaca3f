#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "photonrl/agents/policy.hpp"

namespace photonrl {

enum class PolicyMode { NormalizedH, Softmax };

// Reference two-layer memory: one h-value per edge (initialized to 1), one
// glow per edge, and a policy read out either as normalized h-values or as
// their softmax. The composite step applies
//
//   h <- h - gamma (h - 1) + g lambda
//
// to every edge with the traversed edge's glow set to 1 first, then decays
// all glows by (1 - eta). This is the ground truth the tree-based update
// rules are checked against.
class TwoLayerOracle {
public:
    TwoLayerOracle(int edge_count, PolicyMode mode, double beta = 1.0);

    int edge_count() const { return static_cast<int>(h_.size()); }
    PolicyMode mode() const { return mode_; }
    double beta() const { return beta_; }

    double h(int edge) const { return h_.at(static_cast<std::size_t>(edge)); }
    double glow(int edge) const { return g_.at(static_cast<std::size_t>(edge)); }
    std::span<const double> h_values() const { return h_; }

    // Primitive pieces, composable by callers that need a different cadence.
    void set_glow(int edge) { g_.at(static_cast<std::size_t>(edge)) = 1.0; }
    void damp(double gamma);                  // h <- h - gamma (h - 1)
    void apply_reward(double lambda);         // h <- h + g lambda
    void decay_glow(double eta);              // g <- (1 - eta) g

    // One full update for a traversal of `edge`.
    void step(int edge, double lambda, double gamma, double eta);

    std::vector<double> policy() const;

private:
    PolicyMode mode_;
    double beta_;
    std::vector<double> h_;
    std::vector<double> g_;
};

inline TwoLayerOracle::TwoLayerOracle(int edge_count, PolicyMode mode, double beta)
    : mode_(mode), beta_(beta) {
    if (edge_count < 1) throw std::invalid_argument("TwoLayerOracle: need at least one edge");
    if (mode == PolicyMode::Softmax && !(beta >= 0.0))
        throw std::invalid_argument("TwoLayerOracle: beta must be >= 0");
    h_.assign(static_cast<std::size_t>(edge_count), 1.0);
    g_.assign(static_cast<std::size_t>(edge_count), 0.0);
}

inline void TwoLayerOracle::damp(double gamma) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("TwoLayerOracle: gamma must be in [0, 1]");
    for (double& h : h_) h -= gamma * (h - 1.0);
}

inline void TwoLayerOracle::apply_reward(double lambda) {
    for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += g_[i] * lambda;
}

inline void TwoLayerOracle::decay_glow(double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("TwoLayerOracle: eta must be in [0, 1]");
    for (double& g : g_) g *= (1.0 - eta);
}

inline void TwoLayerOracle::step(int edge, double lambda, double gamma, double eta) {
    set_glow(edge);
    damp(gamma);
    apply_reward(lambda);
    decay_glow(eta);
}

inline std::vector<double> TwoLayerOracle::policy() const {
    if (mode_ == PolicyMode::Softmax) return softmax_policy(h_, beta_);
    double sum = 0.0;
    for (double h : h_) {
        if (h < 0.0)
            throw std::logic_error("TwoLayerOracle: negative h under normalized-h policy");
        sum += h;
    }
    if (sum <= 0.0) throw std::logic_error("TwoLayerOracle: h-values sum to zero");
    std::vector<double> out(h_.size());
    for (std::size_t i = 0; i < h_.size(); ++i) out[i] = h_[i] / sum;
    return out;
}

}  // namespace photonrl
