#pragma once

#include <stdexcept>
#include <string>

namespace photonrl {

// Closed 1-based interval of leaf labels.
struct LeafInterval {
    int lo = 0;
    int hi = 0;

    bool contains(int leaf) const { return leaf >= lo && leaf <= hi; }
    int width() const { return hi - lo + 1; }
    bool operator==(const LeafInterval&) const = default;
};

// Leaf intervals served by the two branches of one tree node.
struct BranchIntervals {
    LeafInterval upper;
    LeafInterval lower;
};

// Index arithmetic for a depth-n binary beamsplitter tree.
//
// Nodes are addressed (k, l) with layer k in [1, n] and position l in
// [1, 2^(k-1)]; leaves are labeled 1..2^n. Every leaf has a unique
// root-to-leaf path of exactly n nodes, one per layer. The branch digit of a
// leaf at layer k is the k-th bit of (leaf - 1): 0 selects the upper child,
// 1 the lower.
class TreeTopology {
public:
    explicit TreeTopology(int depth) : depth_(depth) {
        if (depth < 1 || depth > 30)
            throw std::invalid_argument("TreeTopology: depth must be in [1, 30], got " +
                                        std::to_string(depth));
    }

    int depth() const { return depth_; }
    int leaf_count() const { return 1 << depth_; }
    int node_count() const { return (1 << depth_) - 1; }

    // Linear storage index (heap order): root is 0, layer k starts at 2^(k-1)-1.
    int node_index(int k, int l) const {
        check_node(k, l);
        return (1 << (k - 1)) - 1 + (l - 1);
    }

    // Branch digit of `leaf` at layer k: 0 = upper, 1 = lower.
    int branch_digit(int leaf, int k) const {
        check_leaf(leaf);
        check_layer(k);
        return ((leaf - 1) >> (depth_ - k)) & 1;
    }

    // Storage index of the node on the leaf's path at layer k.
    int path_node_index(int leaf, int k) const {
        check_leaf(leaf);
        check_layer(k);
        int l = ((leaf - 1) >> (depth_ - k + 1)) + 1;
        return (1 << (k - 1)) - 1 + (l - 1);
    }

    void check_leaf(int leaf) const {
        if (leaf < 1 || leaf > leaf_count())
            throw std::out_of_range("TreeTopology: leaf " + std::to_string(leaf) +
                                    " out of range [1, " + std::to_string(leaf_count()) + "]");
    }

    void check_layer(int k) const {
        if (k < 1 || k > depth_)
            throw std::out_of_range("TreeTopology: layer " + std::to_string(k) +
                                    " out of range [1, " + std::to_string(depth_) + "]");
    }

    void check_node(int k, int l) const {
        check_layer(k);
        if (l < 1 || l > (1 << (k - 1)))
            throw std::out_of_range("TreeTopology: node position " + std::to_string(l) +
                                    " out of range [1, " + std::to_string(1 << (k - 1)) +
                                    "] at layer " + std::to_string(k));
    }

    bool operator==(const TreeTopology&) const = default;

private:
    int depth_;
};

// Leaf intervals reachable through the upper and lower branch of node (k, l)
// in a depth-n tree:
//   U = [1 + (2l-2) 2^(n-k), (2l-1) 2^(n-k)],  D = [1 + (2l-1) 2^(n-k), 2l 2^(n-k)].
// U and D partition the leaves reachable from (k, l).
inline BranchIntervals leaf_intervals(int k, int l, int depth) {
    TreeTopology topo(depth);
    topo.check_node(k, l);
    const int span = 1 << (depth - k);
    BranchIntervals out;
    out.upper = {1 + (2 * l - 2) * span, (2 * l - 1) * span};
    out.lower = {1 + (2 * l - 1) * span, 2 * l * span};
    return out;
}

}  // namespace photonrl
