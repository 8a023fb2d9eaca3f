#pragma once

#include <cstdint>
#include <vector>

#include "photonrl/mesh/noise.hpp"
#include "photonrl/mesh/phase_tree.hpp"
#include "photonrl/mesh/tree_topology.hpp"
#include "photonrl/rng.hpp"

namespace photonrl {

// Per-node eligibility trace. `sign` records which branch the most recent
// traversal took (+1 upper, -1 lower); `stamp` is the owner's step counter at
// that traversal, for closed-form decay without touching every node each step.
struct GlowState {
    double g = 0.0;
    std::int8_t sign = +1;
    std::int64_t stamp = 0;
};

// Cache of (1 - eta)^dt built by repeated multiplication, so the closed-form
// glow equals step-by-step decay bit for bit. Entries that underflow to zero
// terminate the table.
class GlowTable {
public:
    explicit GlowTable(double eta);

    double eta() const { return eta_; }
    double pow(std::int64_t dt);

private:
    double eta_;
    std::vector<double> powers_;
    bool underflowed_ = false;
};

enum class Branch { Upper, Lower };

// Learnable state of one clip: a chi value per beamsplitter node (theta is
// derived as theta_of_chi(chi) and never mutated independently), a signed glow
// per node, the leaf-to-action assignment, per-action cumulative reward
// tallies, and the scalar confidence R used by the SARSA/Q-learning rules.
//
// Leaves beyond `action_count` (when the count is not a power of two) are
// unassigned; sampling re-injects the photon on hitting one, which leaves the
// conditional distribution over real actions unbiased.
class ClipMemory {
public:
    explicit ClipMemory(int action_count);

    const TreeTopology& topology() const { return topo_; }
    int depth() const { return topo_.depth(); }
    int leaf_count() const { return topo_.leaf_count(); }
    int action_count() const { return action_count_; }

    // Ideal device: theta derived from chi plus any prune overrides. Angle
    // derivation is deferred until someone looks, so bulk chi updates
    // (damping, rewards) cost one multiply per node.
    const PhaseTree& tree() const;

    int action_of_leaf(int leaf) const;  // -1 for unassigned leaves
    int leaf_of_action(int action) const;

    // ---- chi --------------------------------------------------------------
    double chi(int k, int l) const { return chi_[topo_.node_index(k, l)]; }
    double chi_at(int node) const { return chi_[static_cast<std::size_t>(node)]; }
    void set_chi_at(int node, double chi);

    // ---- glow ---------------------------------------------------------
    double glow_at(int node) const { return glow_[static_cast<std::size_t>(node)].g; }
    int glow_sign_at(int node) const { return glow_[static_cast<std::size_t>(node)].sign; }

    // Mark the root-to-leaf path as just traversed: g = 1, sign per branch.
    void traverse_glow(int leaf, std::int64_t now = 0);

    // g <- (1 - eta) g on every node; signs unchanged.
    void decay_glow(double eta);

    void reset_glow();

    // ---- learning updates ---------------------------------------------
    // chi <- chi + sign * g * lambda on every live node with g > 0.
    void apply_reward(double lambda);

    // Same rule with the decays since each traversal folded in:
    // effective g = (1 - eta)^(now - stamp).
    void apply_reward_lazy(double lambda, std::int64_t now, GlowTable& table);

    // chi <- gamma * chi on every live node.
    void apply_damping(double gamma);

    // chi <- (1 - alpha) chi + sign * alpha * target on the path to `leaf`.
    void blend_path(int leaf, double alpha, double target);

    // M = max over assigned, reachable leaves of tanh(sum_path |chi| / n).
    double peakedness() const;

    double confidence() const { return confidence_; }
    void set_confidence(double r) { confidence_ = r; }

    // ---- reward ledger --------------------------------------------------
    void record_reward(int action, double lambda);
    double cumulative_reward(int action) const;
    const std::vector<double>& cumulative_rewards() const { return cumulative_reward_; }

    // ---- pruning --------------------------------------------------------
    // Forces `branch` at node (k, l); the cut subtree is excluded from
    // sampling, updates and peakedness. Throws if no assigned leaf would
    // remain reachable.
    void prune(int k, int l, Branch branch);
    bool node_is_live(int node) const { return live_[static_cast<std::size_t>(node)] != 0; }
    bool leaf_is_reachable(int leaf) const;

    // ---- device view ------------------------------------------------------
    // Branch probability actually realized in hardware. Under per-adjustment
    // noise a node whose ideal phase changed since its last use picks up a
    // fresh Gaussian draw here; with sigma = 0 this is exactly the ideal value.
    double device_upper_probability_at(int node, const NoiseSpec& noise, Rng& rng);

    // Single-photon decision: walk the device tree, re-injecting on
    // unassigned leaves (hard cap 64), and return the selected leaf.
    int sample_leaf(Rng& rng, const NoiseSpec& noise);

    // Same, returning the action id. Unlike sample_leaf this survives noisy
    // phase writes that bury the assigned leaves: exhausting the
    // re-injection cap triggers a re-programming of the stored phases (new
    // noise draws) before the decision is retried.
    int sample_action(Rng& rng, const NoiseSpec& noise);

    // Used by defragmentation: replace policy state wholesale.
    void overwrite_policy(const std::vector<double>& leaf_distribution,
                          const std::vector<int>& action_of_leaf);

private:
    void rebuild_live_mask();
    void mark_device_dirty(int node) { device_dirty_[static_cast<std::size_t>(node)] = 1; }
    int walk_to_leaf(Rng& rng, const NoiseSpec& noise);

    TreeTopology topo_;
    mutable PhaseTree tree_;
    mutable bool tree_synced_ = true;
    int action_count_;
    std::vector<double> chi_;
    std::vector<GlowState> glow_;
    std::vector<int> action_of_leaf_;
    std::vector<int> leaf_of_action_;
    std::vector<double> cumulative_reward_;
    std::vector<std::uint8_t> live_;
    double confidence_ = 0.0;

    // Cached hardware branch probabilities (ideal + write noise).
    std::vector<double> device_p_;
    std::vector<std::uint8_t> device_dirty_;
};

// ---- update rules ------------------------------------------------

// chi <- (1 - alpha) chi + sign alpha (lambda + gamma R_next) on the traversed
// path, then R <- (1 - alpha) R + alpha (lambda + gamma R_next).
void sarsa_update(ClipMemory& memory, int leaf, double lambda, double r_next, double alpha,
                  double gamma);

// Same with target lambda + gamma R_next M_next; the confidence update is
// unchanged.
void qlearning_update(ClipMemory& memory, int leaf, double lambda, double r_next, double m_next,
                      double alpha, double gamma);

}  // namespace photonrl
