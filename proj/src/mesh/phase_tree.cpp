#include "photonrl/mesh/phase_tree.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace photonrl {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;
}  // namespace

double theta_of_chi(double chi) {
    if (!std::isfinite(chi)) throw std::domain_error("theta_of_chi: chi must be finite");
    return kQuarterPi * (1.0 + std::tanh(chi));
}

double chi_of_theta(double theta) {
    if (!std::isfinite(theta)) throw std::domain_error("chi_of_theta: theta must be finite");
    double t = 4.0 * theta / kPi - 1.0;
    const double cap = 1.0 - 1e-12;
    if (t > cap) t = cap;
    if (t < -cap) t = -cap;
    return std::atanh(t);
}

PhaseTree::PhaseTree(TreeTopology topo)
    : topo_(topo),
      theta_(static_cast<std::size_t>(topo.node_count()), kQuarterPi),
      prune_(static_cast<std::size_t>(topo.node_count()), PruneOverride::None) {}

void PhaseTree::set_theta_at(int node, double theta) {
    if (!std::isfinite(theta)) throw std::domain_error("PhaseTree: theta must be finite");
    theta_[static_cast<std::size_t>(node)] = theta;
}

bool PhaseTree::has_prunes() const {
    for (PruneOverride p : prune_)
        if (p != PruneOverride::None) return true;
    return false;
}

double PhaseTree::upper_probability_at(int node) const {
    switch (prune_[static_cast<std::size_t>(node)]) {
        case PruneOverride::Upper:
            return 1.0;
        case PruneOverride::Lower:
            return 0.0;
        case PruneOverride::None:
            break;
    }
    double s = std::sin(theta_[static_cast<std::size_t>(node)]);
    return s * s;
}

double PhaseTree::leaf_probability(int leaf) const {
    topo_.check_leaf(leaf);
    double p = 1.0;
    for (int k = 1; k <= topo_.depth(); ++k) {
        double up = upper_probability_at(topo_.path_node_index(leaf, k));
        p *= (topo_.branch_digit(leaf, k) == 0) ? up : 1.0 - up;
    }
    return p;
}

std::vector<double> PhaseTree::leaf_distribution() const {
    // One multiply per node instead of per (leaf, layer) pair.
    const int n = topo_.depth();
    std::vector<double> acc{1.0};
    for (int k = 1; k <= n; ++k) {
        std::vector<double> next(static_cast<std::size_t>(1) << k);
        const int base = (1 << (k - 1)) - 1;
        for (int l = 0; l < (1 << (k - 1)); ++l) {
            double up = upper_probability_at(base + l);
            next[static_cast<std::size_t>(2 * l)] = acc[static_cast<std::size_t>(l)] * up;
            next[static_cast<std::size_t>(2 * l + 1)] = acc[static_cast<std::size_t>(l)] * (1.0 - up);
        }
        acc = std::move(next);
    }
    return acc;
}

int PhaseTree::sample_leaf(Rng& rng, const NoiseSpec& noise) const {
    noise.validate();
    const bool shot_noise = noise.enabled() && noise.mode == NoiseMode::PerShot;
    int node = 0;   // heap index of the current node
    int leaf0 = 0;  // 0-based leaf label under construction
    for (int k = 1; k <= topo_.depth(); ++k) {
        int digit;
        PruneOverride p = prune_[static_cast<std::size_t>(node)];
        if (p != PruneOverride::None) {
            digit = (p == PruneOverride::Upper) ? 0 : 1;
        } else {
            double theta = theta_[static_cast<std::size_t>(node)];
            if (shot_noise) theta = perturb_phase(theta, noise, rng);
            double s = std::sin(theta);
            digit = (rng.uniform01() < s * s) ? 0 : 1;
        }
        leaf0 = 2 * leaf0 + digit;
        node = 2 * node + 1 + digit;
    }
    return leaf0 + 1;
}

PhaseTree program_tree(std::vector<double> q) {
    if (q.size() < 2)
        throw std::invalid_argument("program_tree: need at least 2 probabilities, got " +
                                    std::to_string(q.size()));
    double sum = 0.0;
    for (double v : q) {
        if (!std::isfinite(v)) throw std::domain_error("program_tree: entries must be finite");
        if (v < 0.0) throw std::domain_error("program_tree: entries must be >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("program_tree: probabilities sum to " + std::to_string(sum) +
                                    ", expected 1 within 1e-9");
    for (double& v : q) v /= sum;

    // Pad to the next power of two; padded leaves carry zero mass.
    int depth = 1;
    while ((static_cast<std::size_t>(1) << depth) < q.size()) ++depth;
    q.resize(static_cast<std::size_t>(1) << depth, 0.0);

    PhaseTree tree{TreeTopology(depth)};
    for (int k = 1; k <= depth; ++k) {
        for (int l = 1; l <= (1 << (k - 1)); ++l) {
            BranchIntervals iv = leaf_intervals(k, l, depth);
            double u = 0.0, d = 0.0;
            for (int i = iv.upper.lo; i <= iv.upper.hi; ++i) u += q[static_cast<std::size_t>(i - 1)];
            for (int i = iv.lower.lo; i <= iv.lower.hi; ++i) d += q[static_cast<std::size_t>(i - 1)];
            double theta;
            if (u == 0.0 && d == 0.0) {
                theta = kQuarterPi;  // unreachable subtree
            } else {
                // atan2 realizes arctan sqrt(u/d) with exact limits:
                // d = 0 gives pi/2, u = 0 gives 0.
                theta = std::atan2(std::sqrt(u), std::sqrt(d));
            }
            tree.set_theta(k, l, theta);
        }
    }
    return tree;
}

}  // namespace photonrl
