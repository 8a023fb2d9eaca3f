#pragma once

#include <vector>

#include "photonrl/mesh/tree_topology.hpp"

namespace photonrl {

// Tree memory parameterized by the branch-probability ratio
// xi = p_up / (1 - p_up) at each node, with local update rules that reproduce
// a two-layer memory exactly: after every reward the leaf distribution
// derived from xi equals the two-layer policy (normalized h-values in
// Standard mode, softmax of h-values in Softmax mode). The equivalent phases
// are theta = arctan sqrt(xi).
class ExactXiTree {
public:
    enum class Mode { Standard, Softmax };

    static ExactXiTree standard(int depth);
    static ExactXiTree softmax(int depth, double beta);

    Mode mode() const { return mode_; }
    int depth() const { return topo_.depth(); }
    const TreeTopology& topology() const { return topo_; }

    double xi(int k, int l) const { return xi_[topo_.node_index(k, l)]; }
    double xi_at(int node) const { return xi_[static_cast<std::size_t>(node)]; }

    // Total h-mass below a node (Standard mode only).
    double mass(int k, int l) const;

    double upper_probability_at(int node) const {
        double x = xi_[static_cast<std::size_t>(node)];
        return x / (1.0 + x);
    }

    // Credit leaf `rewarded` with lambda >= 0; dispatches on mode.
    void reward(int rewarded, double lambda);

    std::vector<double> leaf_distribution() const;

private:
    ExactXiTree(int depth, Mode mode, double beta);

    void reward_standard(int rewarded, double lambda);
    void reward_softmax(int rewarded, double lambda);

    TreeTopology topo_;
    Mode mode_;
    double beta_;
    std::vector<double> xi_;
    std::vector<double> mass_;  // Standard mode: N = u + d per node
};

}  // namespace photonrl
