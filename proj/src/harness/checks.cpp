#include "photonrl/harness/checks.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "photonrl/agents/clip_memory.hpp"
#include "photonrl/agents/exact_xi_tree.hpp"
#include "photonrl/agents/policy.hpp"
#include "photonrl/agents/two_layer_oracle.hpp"
#include "photonrl/memops/defrag.hpp"
#include "photonrl/mesh/mzi.hpp"
#include "photonrl/mesh/phase_tree.hpp"
#include "photonrl/rng.hpp"

namespace photonrl {

namespace {

CheckResult make_result(std::string name, double observed, double bound, std::string detail = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.observed = observed;
    r.bound = bound;
    r.pass = observed <= bound && std::isfinite(observed);
    r.detail = std::move(detail);
    return r;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Shared protocol for both equivalence checks: per (depth, sequence), feed the
// same random (leaf, lambda) rewards to the xi-tree and a fresh two-layer
// memory, comparing derived and reference distributions after every step.
double equivalence_protocol(std::uint64_t seed, bool softmax, int sequences, int steps) {
    double worst = 0.0;
    const double beta = 1.0;
    for (int depth = 1; depth <= 4; ++depth) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(depth)));
        const int leaves = 1 << depth;
        for (int s = 0; s < sequences; ++s) {
            ExactXiTree tree = softmax ? ExactXiTree::softmax(depth, beta)
                                       : ExactXiTree::standard(depth);
            TwoLayerOracle oracle(leaves, softmax ? PolicyMode::Softmax : PolicyMode::NormalizedH,
                                  beta);
            for (int step = 0; step < steps; ++step) {
                int leaf = 1 + rng.uniform_int(leaves);
                double lambda = 2.0 * rng.uniform01();
                tree.reward(leaf, lambda);
                // Pure reward event: h_c' += lambda.
                oracle.step(leaf - 1, lambda, /*gamma=*/0.0, /*eta=*/1.0);
                worst = std::max(worst, max_abs_diff(tree.leaf_distribution(), oracle.policy()));
            }
        }
    }
    return worst;
}

}  // namespace

CheckResult check_equivalence_standard(std::uint64_t seed) {
    double worst = equivalence_protocol(seed, false, 200, 100);
    return make_result("equivalence-standard", worst, 1e-10,
                       "xi-tree vs normalized-h two-layer memory, depths 1-4");
}

CheckResult check_equivalence_softmax(std::uint64_t seed) {
    double worst = equivalence_protocol(seed, true, 200, 100);
    return make_result("equivalence-softmax", worst, 1e-10,
                       "xi-tree vs softmax-of-h two-layer memory, depths 1-4");
}

CheckResult check_programming_round_trip(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        int depth = 1 + i % 6;
        int leaves = 1 << depth;
        std::vector<double> q(static_cast<std::size_t>(leaves));
        double sum = 0.0;
        for (double& v : q) {
            v = rng.uniform01();
            sum += v;
        }
        for (double& v : q) v /= sum;
        // A sprinkling of exact zeros exercises the saturated-angle paths.
        if (i % 7 == 0 && leaves > 2) {
            q[static_cast<std::size_t>(rng.uniform_int(leaves))] = 0.0;
            double s2 = 0.0;
            for (double v : q) s2 += v;
            for (double& v : q) v /= s2;
        }
        PhaseTree tree = program_tree(q);
        std::vector<double> back = tree.leaf_distribution();
        worst = std::max(worst, max_abs_diff(back, q));
    }
    return make_result("programming-round-trip", worst, 1e-12, "1000 distributions, depths 1-6");
}

CheckResult check_mzi_unitarity(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double phi = (rng.uniform01() * 2.0 - 1.0) * 2.0 * std::numbers::pi;
        Mat2c u = mzi_unitary(phi);
        Mat2c prod = mat2c_multiply(mat2c_adjoint(u), u);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                std::complex<double> expect = (r == c) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(prod[r][c] - expect));
            }
    }
    return make_result("mzi-unitarity", worst, 1e-14, "U†U = I over 100 random phases");
}

CheckResult check_mzi_phase_correspondence(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double theta = rng.uniform01() * std::numbers::pi / 2.0;
        Mat2c u = mzi_unitary(2.0 * theta);
        double bar = std::norm(u[0][0]);
        double s = std::sin(theta);
        worst = std::max(worst, std::abs(bar - s * s));
    }
    return make_result("mzi-phase-correspondence", worst, 1e-14,
                       "|U11(2θ)|² = sin²θ over 100 random angles");
}

CheckResult check_glow_law(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (double eta : {0.11, 0.5, 0.03, 0.9}) {
        ClipMemory memory(4);
        memory.traverse_glow(1);
        int decays = 1 + rng.uniform_int(60);
        for (int i = 0; i < decays; ++i) memory.decay_glow(eta);
        double expect = std::pow(1.0 - eta, static_cast<double>(decays));
        for (int k = 1; k <= memory.depth(); ++k) {
            int node = memory.topology().path_node_index(1, k);
            worst = std::max(worst, std::abs(memory.glow_at(node) - expect));
        }
    }
    return make_result("glow-law", worst, 1e-14, "g after δt decays equals (1-η)^δt");
}

CheckResult check_leaf_normalization(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        int depth = 1 + rng.uniform_int(6);
        PhaseTree tree{TreeTopology(depth)};
        for (int node = 0; node < tree.topology().node_count(); ++node)
            tree.set_theta_at(node, rng.uniform01() * std::numbers::pi / 2.0);
        if (i % 3 == 0)  // prune a random node
            tree.set_prune_at(rng.uniform_int(tree.topology().node_count()),
                              rng.uniform01() < 0.5 ? PruneOverride::Upper : PruneOverride::Lower);
        double sum = 0.0;
        for (double p : tree.leaf_distribution()) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return make_result("leaf-normalization", worst, 1e-12,
                       "Σ leaf probabilities = 1, random and pruned trees");
}

CheckResult check_defrag_invariance(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        int actions = 2 + rng.uniform_int(7);  // 2..8, mixes padded and full trees
        ClipMemory memory(actions);
        for (int node = 0; node < memory.topology().node_count(); ++node)
            memory.set_chi_at(node, 3.0 * (rng.uniform01() * 2.0 - 1.0));
        for (int a = 0; a < actions; ++a)
            memory.record_reward(a, rng.uniform01() < 0.3 ? 0.0 : rng.uniform01());

        std::vector<double> before(static_cast<std::size_t>(actions));
        std::vector<double> q = memory.tree().leaf_distribution();
        for (int a = 0; a < actions; ++a)
            before[static_cast<std::size_t>(a)] = q[static_cast<std::size_t>(memory.leaf_of_action(a) - 1)];

        defragment(memory);

        std::vector<double> q2 = memory.tree().leaf_distribution();
        for (int a = 0; a < actions; ++a) {
            double after = q2[static_cast<std::size_t>(memory.leaf_of_action(a) - 1)];
            worst = std::max(worst, std::abs(after - before[static_cast<std::size_t>(a)]));
        }
    }
    return make_result("defrag-invariance", worst, 1e-12,
                       "per-action selection probabilities preserved across defragmentation");
}

CheckResult check_softmax_uniformity() {
    double worst = 0.0;
    for (int n : {2, 3, 7, 16}) {
        std::vector<double> values(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = std::cos(static_cast<double>(i));
        std::vector<double> pi = softmax_policy(values, 0.0);
        for (double p : pi) worst = std::max(worst, std::abs(p - 1.0 / n));
    }
    return make_result("softmax-beta0-uniform", worst, 0.0, "β = 0 collapses to exact uniform");
}

CheckResult check_arcsin_tanh_regression() {
    // Frozen dense-scan maximum of |arcsin(tanh x) - (π/2) tanh(2x/π)| over
    // x in [-10, 10] at step 1e-4.
    constexpr double kFrozenMax = 0.040951172379279477;
    double measured = 0.0;
    const double step = 1e-4;
    const long n = static_cast<long>(20.0 / step);
    for (long i = 0; i <= n; ++i) {
        double x = -10.0 + static_cast<double>(i) * step;
        double d = std::abs(std::asin(std::tanh(x)) -
                            (std::numbers::pi / 2.0) * std::tanh(2.0 * x / std::numbers::pi));
        measured = std::max(measured, d);
    }
    std::ostringstream detail;
    detail << "measured " << measured << " vs frozen " << kFrozenMax;
    return make_result("arcsin-tanh-regression", std::abs(measured - kFrozenMax), 1e-6,
                       detail.str());
}

std::vector<CheckResult> run_verification_suites(std::uint64_t seed) {
    return {
        check_equivalence_standard(seed),
        check_equivalence_softmax(seed),
        check_programming_round_trip(seed),
        check_mzi_unitarity(seed),
        check_mzi_phase_correspondence(seed),
        check_glow_law(seed),
        check_leaf_normalization(seed),
        check_defrag_invariance(seed),
        check_softmax_uniformity(),
        check_arcsin_tanh_regression(),
    };
}

}  // namespace photonrl
