#pragma once

#include <cstdint>
#include <vector>

#include "photonrl/mesh/noise.hpp"
#include "photonrl/mesh/tree_topology.hpp"
#include "photonrl/rng.hpp"

namespace photonrl {

// Forces one branch of a node to probability exactly 1 regardless of theta.
enum class PruneOverride : std::uint8_t { None = 0, Upper, Lower };

// Sigmoid map from the learnable quantity chi to a beamsplitter angle:
//   theta(chi) = (pi/4) (1 + tanh chi) in (0, pi/2),
// chi = 0 giving the balanced splitter theta = pi/4. Throws on non-finite chi.
double theta_of_chi(double chi);

// Inverse of theta_of_chi; the tanh argument is clamped to 1 - 1e-12 in
// magnitude so saturated angles map to large finite chi.
double chi_of_theta(double theta);

// One binary decision tree of tunable beamsplitters. Each node carries an
// angle theta in [0, pi/2]; the upper branch is taken with probability
// sin^2(theta), the lower with 1 - sin^2(theta). Leaf probabilities are the
// products of branch probabilities along the root-to-leaf path.
class PhaseTree {
public:
    explicit PhaseTree(TreeTopology topo);

    const TreeTopology& topology() const { return topo_; }

    double theta(int k, int l) const { return theta_[topo_.node_index(k, l)]; }
    double theta_at(int node) const { return theta_[static_cast<std::size_t>(node)]; }
    void set_theta(int k, int l, double theta) { set_theta_at(topo_.node_index(k, l), theta); }
    void set_theta_at(int node, double theta);

    PruneOverride prune(int k, int l) const { return prune_[topo_.node_index(k, l)]; }
    PruneOverride prune_at(int node) const { return prune_[static_cast<std::size_t>(node)]; }
    void set_prune(int k, int l, PruneOverride p) { prune_[topo_.node_index(k, l)] = p; }
    void set_prune_at(int node, PruneOverride p) { prune_[static_cast<std::size_t>(node)] = p; }
    bool has_prunes() const;

    // Probability of the upper branch at a node; exactly 0 or 1 under a prune
    // override.
    double upper_probability_at(int node) const;

    // Probability of detecting the photon at `leaf` (1-based).
    double leaf_probability(int leaf) const;

    // All 2^n leaf probabilities; sums to 1 within accumulation error.
    std::vector<double> leaf_distribution() const;

    // Single-photon traversal: walks root to leaf taking the upper branch
    // with probability sin^2(theta_noisy). Per-shot noise is drawn here;
    // per-adjustment noise belongs to whoever writes the phases and is not
    // applied by this query.
    int sample_leaf(Rng& rng, const NoiseSpec& noise = NoiseSpec{}) const;

private:
    TreeTopology topo_;
    std::vector<double> theta_;
    std::vector<PruneOverride> prune_;
};

// Phases that reproduce a target leaf distribution q: at every node
// theta = arctan sqrt(sum_U q / sum_D q). q is renormalized internally (its
// sum must be within 1e-9 of 1) and padded with zeros to the next power of
// two. Zero-mass subtrees: theta is exactly pi/2 (or 0) when only one branch
// has mass, and pi/4 by convention when both are empty.
PhaseTree program_tree(std::vector<double> q);

}  // namespace photonrl
