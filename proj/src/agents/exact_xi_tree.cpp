#include "photonrl/agents/exact_xi_tree.hpp"

#include <cmath>
#include <stdexcept>

namespace photonrl {

ExactXiTree ExactXiTree::standard(int depth) { return ExactXiTree(depth, Mode::Standard, 0.0); }

ExactXiTree ExactXiTree::softmax(int depth, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("ExactXiTree: beta must be finite and >= 0");
    return ExactXiTree(depth, Mode::Softmax, beta);
}

ExactXiTree::ExactXiTree(int depth, Mode mode, double beta)
    : topo_(depth),
      mode_(mode),
      beta_(beta),
      xi_(static_cast<std::size_t>(topo_.node_count()), 1.0) {
    if (mode_ == Mode::Standard) {
        // N_(k,l) = 2^(n-k+1): the h-mass of the subtree under unit init.
        mass_.resize(static_cast<std::size_t>(topo_.node_count()));
        for (int k = 1; k <= depth; ++k)
            for (int l = 1; l <= (1 << (k - 1)); ++l)
                mass_[static_cast<std::size_t>(topo_.node_index(k, l))] =
                    static_cast<double>(1 << (depth - k + 1));
    }
}

double ExactXiTree::mass(int k, int l) const {
    if (mode_ != Mode::Standard) throw std::logic_error("ExactXiTree: mass tracked in Standard mode only");
    return mass_[static_cast<std::size_t>(topo_.node_index(k, l))];
}

void ExactXiTree::reward(int rewarded, double lambda) {
    topo_.check_leaf(rewarded);
    if (lambda < 0.0) throw std::invalid_argument("ExactXiTree: lambda must be >= 0");
    if (lambda == 0.0) return;
    if (mode_ == Mode::Standard)
        reward_standard(rewarded, lambda);
    else
        reward_softmax(rewarded, lambda);
}

void ExactXiTree::reward_standard(int rewarded, double lambda) {
    // Per path node:  xi <- xi [1 + (1 + xi^{-(-1)^digit}) lambda / N]^{(-1)^digit},
    //                 N <- N + lambda,
    // which tracks u/d and u+d of a two-layer memory receiving h_c' += lambda.
    for (int k = 1; k <= topo_.depth(); ++k) {
        const std::size_t node = static_cast<std::size_t>(topo_.path_node_index(rewarded, k));
        const int digit = topo_.branch_digit(rewarded, k);
        const double xi = xi_[node];
        const double n = mass_[node];
        if (digit == 0) {
            xi_[node] = xi * (1.0 + (1.0 + 1.0 / xi) * lambda / n);
        } else {
            xi_[node] = xi / (1.0 + (1.0 + xi) * lambda / n);
        }
        mass_[node] = n + lambda;
    }
}

void ExactXiTree::reward_softmax(int rewarded, double lambda) {
    // Per path node:  xi <- xi [1 + (e^{beta lambda} - 1) P]^{(-1)^digit}
    // where P is the probability of reaching the rewarded leaf from the
    // node's child on the rewarded side, i.e. the product of
    // branch-toward-leaf probabilities over the path nodes strictly below.
    // All factors use pre-update values.
    const int n = topo_.depth();
    const double boost = std::expm1(beta_ * lambda);  // e^{beta lambda} - 1

    // Suffix products of branch probabilities along the rewarded path.
    std::vector<double> below(static_cast<std::size_t>(n) + 1);
    below[static_cast<std::size_t>(n)] = 1.0;
    for (int k = n; k >= 1; --k) {
        const std::size_t node = static_cast<std::size_t>(topo_.path_node_index(rewarded, k));
        const double p_up = xi_[node] / (1.0 + xi_[node]);
        const double toward = (topo_.branch_digit(rewarded, k) == 0) ? p_up : 1.0 - p_up;
        below[static_cast<std::size_t>(k - 1)] = toward * below[static_cast<std::size_t>(k)];
    }

    for (int k = 1; k <= n; ++k) {
        const std::size_t node = static_cast<std::size_t>(topo_.path_node_index(rewarded, k));
        const double factor = 1.0 + boost * below[static_cast<std::size_t>(k)];
        if (topo_.branch_digit(rewarded, k) == 0)
            xi_[node] *= factor;
        else
            xi_[node] /= factor;
    }
}

std::vector<double> ExactXiTree::leaf_distribution() const {
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

}  // namespace photonrl
