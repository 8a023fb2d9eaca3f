#include "photonrl/agents/clip_memory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace photonrl {

namespace {

int depth_for_actions(int action_count) {
    if (action_count < 1) throw std::invalid_argument("ClipMemory: need at least one action");
    int depth = 1;
    while ((1 << depth) < action_count) ++depth;
    return depth;
}

}  // namespace

GlowTable::GlowTable(double eta) : eta_(eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("GlowTable: eta must be in [0, 1]");
    powers_.push_back(1.0);
}

double GlowTable::pow(std::int64_t dt) {
    if (dt < 0) throw std::invalid_argument("GlowTable: negative time difference");
    if (eta_ == 0.0) return 1.0;
    if (static_cast<std::size_t>(dt) < powers_.size()) return powers_[static_cast<std::size_t>(dt)];
    if (underflowed_) return 0.0;
    const double factor = 1.0 - eta_;
    double v = powers_.back();
    while (static_cast<std::size_t>(dt) >= powers_.size()) {
        v *= factor;
        if (v == 0.0) {
            underflowed_ = true;
            return 0.0;
        }
        powers_.push_back(v);
    }
    return powers_[static_cast<std::size_t>(dt)];
}

ClipMemory::ClipMemory(int action_count)
    : topo_(depth_for_actions(action_count)),
      tree_(topo_),
      action_count_(action_count),
      chi_(static_cast<std::size_t>(topo_.node_count()), 0.0),
      glow_(static_cast<std::size_t>(topo_.node_count())),
      action_of_leaf_(static_cast<std::size_t>(topo_.leaf_count()), -1),
      leaf_of_action_(static_cast<std::size_t>(action_count), 0),
      cumulative_reward_(static_cast<std::size_t>(action_count), 0.0),
      live_(static_cast<std::size_t>(topo_.node_count()), 1),
      device_p_(static_cast<std::size_t>(topo_.node_count()), 0.5),
      device_dirty_(static_cast<std::size_t>(topo_.node_count()), 1) {
    for (int a = 0; a < action_count; ++a) {
        action_of_leaf_[static_cast<std::size_t>(a)] = a;
        leaf_of_action_[static_cast<std::size_t>(a)] = a + 1;
    }
}

int ClipMemory::action_of_leaf(int leaf) const {
    topo_.check_leaf(leaf);
    return action_of_leaf_[static_cast<std::size_t>(leaf - 1)];
}

int ClipMemory::leaf_of_action(int action) const {
    if (action < 0 || action >= action_count_)
        throw std::out_of_range("ClipMemory: action " + std::to_string(action) + " out of range");
    return leaf_of_action_[static_cast<std::size_t>(action)];
}

const PhaseTree& ClipMemory::tree() const {
    if (!tree_synced_) {
        for (int node = 0; node < topo_.node_count(); ++node)
            tree_.set_theta_at(node, theta_of_chi(chi_[static_cast<std::size_t>(node)]));
        tree_synced_ = true;
    }
    return tree_;
}

void ClipMemory::set_chi_at(int node, double chi) {
    if (!std::isfinite(chi)) throw std::domain_error("ClipMemory: chi must be finite");
    chi_[static_cast<std::size_t>(node)] = chi;
    tree_synced_ = false;
    mark_device_dirty(node);
}

void ClipMemory::traverse_glow(int leaf, std::int64_t now) {
    topo_.check_leaf(leaf);
    for (int k = 1; k <= topo_.depth(); ++k) {
        int node = topo_.path_node_index(leaf, k);
        if (!node_is_live(node)) continue;
        GlowState& gs = glow_[static_cast<std::size_t>(node)];
        gs.g = 1.0;
        gs.sign = (topo_.branch_digit(leaf, k) == 0) ? +1 : -1;
        gs.stamp = now;
    }
}

void ClipMemory::decay_glow(double eta) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("decay_glow: eta must be in [0, 1]");
    const double factor = 1.0 - eta;
    for (GlowState& gs : glow_) gs.g *= factor;
}

void ClipMemory::reset_glow() {
    for (GlowState& gs : glow_) gs = GlowState{};
}

void ClipMemory::apply_reward(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("apply_reward: lambda must be >= 0");
    if (lambda == 0.0) return;
    for (std::size_t i = 0; i < glow_.size(); ++i) {
        const GlowState& gs = glow_[i];
        if (gs.g > 0.0 && live_[i])
            set_chi_at(static_cast<int>(i), chi_[i] + gs.sign * gs.g * lambda);
    }
}

void ClipMemory::apply_reward_lazy(double lambda, std::int64_t now, GlowTable& table) {
    if (lambda < 0.0) throw std::invalid_argument("apply_reward_lazy: lambda must be >= 0");
    if (lambda == 0.0) return;
    for (std::size_t i = 0; i < glow_.size(); ++i) {
        const GlowState& gs = glow_[i];
        if (gs.g <= 0.0 || !live_[i]) continue;
        double g_eff = gs.g * table.pow(now - gs.stamp);
        if (g_eff == 0.0) continue;
        set_chi_at(static_cast<int>(i), chi_[i] + gs.sign * g_eff * lambda);
    }
}

void ClipMemory::apply_damping(double gamma) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("apply_damping: gamma must be in [0, 1]");
    if (gamma == 1.0) return;
    for (std::size_t i = 0; i < chi_.size(); ++i) {
        if (!live_[i] || chi_[i] == 0.0) continue;
        set_chi_at(static_cast<int>(i), gamma * chi_[i]);
    }
}

void ClipMemory::blend_path(int leaf, double alpha, double target) {
    topo_.check_leaf(leaf);
    for (int k = 1; k <= topo_.depth(); ++k) {
        int node = topo_.path_node_index(leaf, k);
        if (!node_is_live(node)) continue;
        double sign = (topo_.branch_digit(leaf, k) == 0) ? 1.0 : -1.0;
        set_chi_at(node, (1.0 - alpha) * chi_at(node) + sign * alpha * target);
    }
}

double ClipMemory::peakedness() const {
    const int n = topo_.depth();
    double best = 0.0;
    for (int leaf = 1; leaf <= topo_.leaf_count(); ++leaf) {
        if (action_of_leaf_[static_cast<std::size_t>(leaf - 1)] < 0) continue;
        if (!leaf_is_reachable(leaf)) continue;
        double sum = 0.0;
        for (int k = 1; k <= n; ++k) {
            int node = topo_.path_node_index(leaf, k);
            if (!node_is_live(node)) continue;
            sum += std::abs(chi_[static_cast<std::size_t>(node)]);
        }
        double m = std::tanh(sum / n);
        if (m > best) best = m;
    }
    return best;
}

void ClipMemory::record_reward(int action, double lambda) {
    if (action < 0 || action >= action_count_)
        throw std::out_of_range("record_reward: action " + std::to_string(action) + " out of range");
    cumulative_reward_[static_cast<std::size_t>(action)] += lambda;
}

double ClipMemory::cumulative_reward(int action) const {
    if (action < 0 || action >= action_count_)
        throw std::out_of_range("cumulative_reward: action out of range");
    return cumulative_reward_[static_cast<std::size_t>(action)];
}

bool ClipMemory::leaf_is_reachable(int leaf) const {
    for (int k = 1; k <= topo_.depth(); ++k) {
        int node = topo_.path_node_index(leaf, k);
        PruneOverride p = tree_.prune_at(node);
        if (p == PruneOverride::None) continue;
        int taken = topo_.branch_digit(leaf, k);
        if ((p == PruneOverride::Upper && taken != 0) || (p == PruneOverride::Lower && taken != 1))
            return false;
    }
    return true;
}

void ClipMemory::prune(int k, int l, Branch branch) {
    int node = topo_.node_index(k, l);
    PruneOverride previous = tree_.prune_at(node);
    tree_.set_prune_at(node, branch == Branch::Upper ? PruneOverride::Upper : PruneOverride::Lower);
    bool any_reachable = false;
    for (int leaf = 1; leaf <= topo_.leaf_count() && !any_reachable; ++leaf)
        any_reachable = action_of_leaf_[static_cast<std::size_t>(leaf - 1)] >= 0 && leaf_is_reachable(leaf);
    if (!any_reachable) {
        tree_.set_prune_at(node, previous);
        throw std::logic_error("prune: would leave no reachable action");
    }
    rebuild_live_mask();
    mark_device_dirty(node);
}

void ClipMemory::rebuild_live_mask() {
    // A node is live unless it carries an override or sits in a cut subtree.
    std::fill(live_.begin(), live_.end(), std::uint8_t{1});
    for (int k = 1; k <= topo_.depth(); ++k) {
        for (int l = 1; l <= (1 << (k - 1)); ++l) {
            int node = topo_.node_index(k, l);
            PruneOverride p = tree_.prune_at(node);
            bool unreachable = !live_[static_cast<std::size_t>(node)];
            if (p != PruneOverride::None) live_[static_cast<std::size_t>(node)] = 0;
            if (k == topo_.depth()) continue;
            int upper_child = 2 * node + 1;
            int lower_child = 2 * node + 2;
            if (unreachable) {
                live_[static_cast<std::size_t>(upper_child)] = 0;
                live_[static_cast<std::size_t>(lower_child)] = 0;
            } else if (p == PruneOverride::Upper) {
                live_[static_cast<std::size_t>(lower_child)] = 0;
            } else if (p == PruneOverride::Lower) {
                live_[static_cast<std::size_t>(upper_child)] = 0;
            }
        }
    }
}

double ClipMemory::device_upper_probability_at(int node, const NoiseSpec& noise, Rng& rng) {
    PruneOverride p = tree_.prune_at(node);
    if (p == PruneOverride::Upper) return 1.0;
    if (p == PruneOverride::Lower) return 0.0;
    const std::size_t i = static_cast<std::size_t>(node);
    if (noise.enabled() && noise.mode == NoiseMode::PerShot) {
        double theta = perturb_phase(theta_of_chi(chi_[i]), noise, rng);
        double s = std::sin(theta);
        return s * s;
    }
    if (device_dirty_[i]) {
        double theta = theta_of_chi(chi_[i]);
        if (noise.enabled()) theta = perturb_phase(theta, noise, rng);
        double s = std::sin(theta);
        device_p_[i] = s * s;
        device_dirty_[i] = 0;
    }
    return device_p_[i];
}

int ClipMemory::walk_to_leaf(Rng& rng, const NoiseSpec& noise) {
    int node = 0;
    int leaf0 = 0;
    for (int k = 1; k <= topo_.depth(); ++k) {
        int digit;
        PruneOverride p = tree_.prune_at(node);
        if (p != PruneOverride::None) {
            digit = (p == PruneOverride::Upper) ? 0 : 1;
        } else {
            double up = device_upper_probability_at(node, noise, rng);
            digit = (rng.uniform01() < up) ? 0 : 1;
        }
        leaf0 = 2 * leaf0 + digit;
        node = 2 * node + 1 + digit;
    }
    return leaf0 + 1;
}

int ClipMemory::sample_leaf(Rng& rng, const NoiseSpec& noise) {
    noise.validate();
    constexpr int kMaxReinjections = 64;
    for (int attempt = 0; attempt <= kMaxReinjections; ++attempt) {
        int leaf = walk_to_leaf(rng, noise);
        if (action_of_leaf_[static_cast<std::size_t>(leaf - 1)] >= 0) return leaf;
    }
    throw std::runtime_error("sample_leaf: exceeded 64 re-injections on unassigned leaves");
}

int ClipMemory::sample_action(Rng& rng, const NoiseSpec& noise) {
    noise.validate();
    // Persistent write noise can park nearly all output mass on unassigned
    // leaves. When the re-injection cap runs out, the controller re-programs
    // the path phases (fresh noise draws) and detection restarts; an ideal or
    // per-shot device gains nothing from that, so it fails straight away.
    constexpr int kMaxReprograms = 16;
    const bool can_reprogram = noise.enabled() && noise.mode == NoiseMode::PerAdjustment;
    for (int round = 0; round < kMaxReprograms; ++round) {
        for (int attempt = 0; attempt <= 64; ++attempt) {
            int leaf = walk_to_leaf(rng, noise);
            int action = action_of_leaf_[static_cast<std::size_t>(leaf - 1)];
            if (action >= 0) return action;
        }
        if (!can_reprogram) break;
        for (int node = 0; node < topo_.node_count(); ++node) mark_device_dirty(node);
    }
    throw std::runtime_error("sample_action: no assigned leaf reachable after re-programming");
}

void ClipMemory::overwrite_policy(const std::vector<double>& leaf_distribution,
                                  const std::vector<int>& action_of_leaf) {
    if (leaf_distribution.size() != static_cast<std::size_t>(topo_.leaf_count()) ||
        action_of_leaf.size() != static_cast<std::size_t>(topo_.leaf_count()))
        throw std::invalid_argument("overwrite_policy: wrong leaf count");
    PhaseTree programmed = program_tree(leaf_distribution);
    for (int node = 0; node < topo_.node_count(); ++node)
        set_chi_at(node, chi_of_theta(programmed.theta_at(node)));
    action_of_leaf_ = action_of_leaf;
    for (int leaf = 1; leaf <= topo_.leaf_count(); ++leaf) {
        int a = action_of_leaf_[static_cast<std::size_t>(leaf - 1)];
        if (a >= 0) leaf_of_action_[static_cast<std::size_t>(a)] = leaf;
    }
    reset_glow();
}

void sarsa_update(ClipMemory& memory, int leaf, double lambda, double r_next, double alpha,
                  double gamma) {
    memory.blend_path(leaf, alpha, lambda + gamma * r_next);
    memory.set_confidence((1.0 - alpha) * memory.confidence() + alpha * (lambda + gamma * r_next));
}

void qlearning_update(ClipMemory& memory, int leaf, double lambda, double r_next, double m_next,
                      double alpha, double gamma) {
    memory.blend_path(leaf, alpha, lambda + gamma * r_next * m_next);
    memory.set_confidence((1.0 - alpha) * memory.confidence() + alpha * (lambda + gamma * r_next));
}

}  // namespace photonrl
