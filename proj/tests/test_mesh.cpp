#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "photonrl/mesh/mzi.hpp"
#include "photonrl/mesh/noise.hpp"
#include "photonrl/mesh/phase_tree.hpp"
#include "photonrl/mesh/tree_topology.hpp"
#include "photonrl/rng.hpp"

using namespace photonrl;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("tree topology counts and paths") {
    for (int n = 1; n <= 6; ++n) {
        TreeTopology topo(n);
        CHECK(topo.node_count() == (1 << n) - 1);
        CHECK(topo.leaf_count() == 1 << n);
        // Each leaf path visits one node per layer, consistent with intervals.
        for (int leaf = 1; leaf <= topo.leaf_count(); ++leaf) {
            for (int k = 1; k <= n; ++k) {
                int node = topo.path_node_index(leaf, k);
                int l = node - ((1 << (k - 1)) - 1) + 1;
                BranchIntervals iv = leaf_intervals(k, l, n);
                int digit = topo.branch_digit(leaf, k);
                CHECK((digit == 0 ? iv.upper : iv.lower).contains(leaf));
            }
        }
    }
}

TEST_CASE("leaf interval partition") {
    for (int n = 1; n <= 6; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int l = 1; l <= (1 << (k - 1)); ++l) {
                BranchIntervals iv = leaf_intervals(k, l, n);
                // U and D are adjacent, equal width, disjoint, and exactly
                // cover the leaves reachable from (k, l).
                CHECK(iv.upper.width() == 1 << (n - k));
                CHECK(iv.lower.width() == 1 << (n - k));
                CHECK(iv.upper.hi + 1 == iv.lower.lo);
                CHECK(iv.upper.lo == 1 + (l - 1) * (1 << (n - k + 1)));
                CHECK(iv.lower.hi == l * (1 << (n - k + 1)));
            }
        }
    }
}

TEST_CASE("leaf interval pinned examples") {
    BranchIntervals a = leaf_intervals(1, 1, 2);
    CHECK(a.upper == LeafInterval{1, 2});
    CHECK(a.lower == LeafInterval{3, 4});

    BranchIntervals b = leaf_intervals(3, 1, 3);
    CHECK(b.upper == LeafInterval{1, 1});
    CHECK(b.lower == LeafInterval{2, 2});

    BranchIntervals c = leaf_intervals(2, 2, 2);
    CHECK(c.upper == LeafInterval{3, 3});
    CHECK(c.lower == LeafInterval{4, 4});

    CHECK_THROWS_AS(leaf_intervals(3, 1, 2), std::out_of_range);
    CHECK_THROWS_AS(leaf_intervals(2, 3, 2), std::out_of_range);
}

TEST_CASE("theta_of_chi map") {
    CHECK(theta_of_chi(0.0) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(theta_of_chi(1.0) == doctest::Approx(1.3835528147393359).epsilon(1e-14));
    CHECK(theta_of_chi(40.0) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(theta_of_chi(8.0) < kPi / 2);   // interior until tanh saturates
    CHECK(theta_of_chi(-8.0) > 0.0);
    CHECK_THROWS_AS(theta_of_chi(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(theta_of_chi(INFINITY), std::domain_error);

    // Strictly increasing; odd symmetry theta(-x) + theta(x) = pi/2.
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        double x = (rng.uniform01() * 2.0 - 1.0) * 8.0;
        double dx = rng.uniform01() + 1e-6;
        CHECK(theta_of_chi(x + dx) > theta_of_chi(x));
        CHECK(std::abs(theta_of_chi(-x) + theta_of_chi(x) - kPi / 2) <= 1e-14);
    }
}

TEST_CASE("chi_of_theta inverts theta_of_chi") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        double chi = (rng.uniform01() * 2.0 - 1.0) * 6.0;
        CHECK(chi_of_theta(theta_of_chi(chi)) == doctest::Approx(chi).epsilon(1e-9));
    }
    CHECK(std::isfinite(chi_of_theta(0.0)));
    CHECK(std::isfinite(chi_of_theta(kPi / 2)));
}

TEST_CASE("program_tree pinned examples") {
    PhaseTree two = program_tree({0.5, 0.5});
    CHECK(two.theta(1, 1) == doctest::Approx(kPi / 4).epsilon(1e-15));

    PhaseTree four = program_tree({0.25, 0.25, 0.25, 0.25});
    for (int node = 0; node < 3; ++node)
        CHECK(four.theta_at(node) == doctest::Approx(kPi / 4).epsilon(1e-15));

    PhaseTree skew = program_tree({0.25, 0.75});
    CHECK(skew.theta(1, 1) == doctest::Approx(kPi / 6).epsilon(1e-14));
    double s = std::sin(skew.theta(1, 1));
    CHECK(s * s == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("program_tree validation and padding") {
    CHECK_THROWS_AS(program_tree({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(program_tree({0.5, -0.5, 1.0}), std::domain_error);
    CHECK_THROWS_AS(program_tree({0.5, 0.6}), std::invalid_argument);

    // Non-power-of-two input pads with zero-mass leaves.
    PhaseTree padded = program_tree({0.2, 0.3, 0.5});
    CHECK(padded.topology().leaf_count() == 4);
    CHECK(padded.leaf_probability(1) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(padded.leaf_probability(4) == doctest::Approx(0.0).epsilon(1e-12));

    // Zero-mass handling: a dead branch gets an exact angle.
    PhaseTree dead = program_tree({0.0, 0.0, 0.5, 0.5});
    CHECK(dead.theta(1, 1) == 0.0);              // all mass on the lower branch
    CHECK(dead.theta(2, 1) == kPi / 4);           // unreachable subtree convention
    CHECK(dead.leaf_probability(1) == 0.0);
    PhaseTree dead_lower = program_tree({0.5, 0.5, 0.0, 0.0});
    CHECK(dead_lower.theta(1, 1) == kPi / 2);
}

TEST_CASE("leaf_probability uniform and single-node cases") {
    PhaseTree uniform{TreeTopology(2)};
    for (int leaf = 1; leaf <= 4; ++leaf)
        CHECK(uniform.leaf_probability(leaf) == doctest::Approx(0.25).epsilon(1e-15));

    PhaseTree one{TreeTopology(1)};
    one.set_theta(1, 1, kPi / 3);
    CHECK(one.leaf_probability(2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(uniform.leaf_probability(5), std::out_of_range);
}

TEST_CASE("leaf_probability agrees with the interval-formula route") {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        int depth = 1 + rng.uniform_int(5);
        PhaseTree tree{TreeTopology(depth)};
        for (int node = 0; node < tree.topology().node_count(); ++node)
            tree.set_theta_at(node, rng.uniform01() * kPi / 2);
        auto theta_of = [&](int k, int l) { return tree.theta(k, l); };
        for (int leaf = 1; leaf <= tree.topology().leaf_count(); ++leaf) {
            double expect = test_oracles::interval_leaf_probability(theta_of, leaf, depth);
            CHECK(tree.leaf_probability(leaf) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("program round-trip on random distributions") {
    Rng rng(22);
    for (int rep = 0; rep < 120; ++rep) {
        int depth = 1 + rep % 6;
        std::vector<double> q(static_cast<std::size_t>(1) << depth);
        double sum = 0.0;
        for (double& v : q) sum += (v = rng.uniform01());
        for (double& v : q) v /= sum;
        PhaseTree tree = program_tree(q);
        std::vector<double> back = tree.leaf_distribution();
        for (std::size_t i = 0; i < q.size(); ++i)
            CHECK(std::abs(back[i] - q[i]) <= 1e-12);
    }
}

TEST_CASE("leaf distribution normalization with prunes") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        int depth = 1 + rng.uniform_int(5);
        PhaseTree tree{TreeTopology(depth)};
        for (int node = 0; node < tree.topology().node_count(); ++node)
            tree.set_theta_at(node, rng.uniform01() * kPi / 2);
        tree.set_prune_at(rng.uniform_int(tree.topology().node_count()),
                          rng.uniform01() < 0.5 ? PruneOverride::Upper : PruneOverride::Lower);
        double total = 0.0;
        for (double p : tree.leaf_distribution()) total += p;
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("mzi_unitary pinned matrices") {
    Mat2c at_pi = mzi_unitary(kPi);
    CHECK(std::abs(at_pi[0][0] - std::complex<double>(1, 0)) <= 1e-15);
    CHECK(std::abs(at_pi[0][1]) <= 1e-15);
    CHECK(std::abs(at_pi[1][0]) <= 1e-15);
    CHECK(std::abs(at_pi[1][1] - std::complex<double>(-1, 0)) <= 1e-15);
    CHECK(std::norm(at_pi[0][0]) == doctest::Approx(1.0).epsilon(1e-14));

    Mat2c at_zero = mzi_unitary(0.0);
    CHECK(std::abs(at_zero[0][0]) <= 1e-15);
    CHECK(std::abs(at_zero[0][1] - std::complex<double>(-1, 0)) <= 1e-15);
    CHECK(std::abs(at_zero[1][0] - std::complex<double>(1, 0)) <= 1e-15);
    CHECK(std::abs(at_zero[1][1]) <= 1e-15);
    CHECK(std::norm(at_zero[0][0]) <= 1e-30);
}

TEST_CASE("mzi unitarity and splitting-ratio correspondence") {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        double phi = (rng.uniform01() * 2.0 - 1.0) * 3.0 * kPi;
        Mat2c u = mzi_unitary(phi);
        Mat2c prod = mat2c_multiply(mat2c_adjoint(u), u);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                CHECK(std::abs(prod[r][c] - (r == c ? 1.0 : 0.0)) <= 1e-14);
        CHECK(std::abs(std::norm(u[0][0]) - std::pow(std::sin(phi / 2), 2)) <= 1e-14);
    }
    // Internal phase 2*theta realizes beamsplitter angle theta.
    for (int i = 0; i < 100; ++i) {
        double theta = rng.uniform01() * kPi / 2;
        Mat2c u = mzi_unitary(2.0 * theta);
        CHECK(std::abs(std::norm(u[0][0]) - std::sin(theta) * std::sin(theta)) <= 1e-14);
    }
}

TEST_CASE("perturb_phase zero-noise identity and clamping") {
    Rng rng(41);
    NoiseSpec off;
    CHECK(perturb_phase(kPi / 4, off, rng) == kPi / 4);

    NoiseSpec bad;
    bad.sigma = -0.5;
    CHECK_THROWS_AS(perturb_phase(kPi / 4, bad, rng), std::invalid_argument);

    NoiseSpec wide{0.1, NoiseMode::PerAdjustment};
    for (int i = 0; i < 5000; ++i) {
        double out = perturb_phase(0.01, wide, rng);
        CHECK(out >= 0.0);
        CHECK(out <= kPi / 2);
    }
}

TEST_CASE("perturb_phase mean concentrates on theta") {
    Rng rng(42);
    NoiseSpec noise{0.1, NoiseMode::PerAdjustment};
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += perturb_phase(kPi / 4, noise, rng);
    double mean = sum / draws;
    double band = 3.0 * 0.1 / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean - kPi / 4) <= band);
}

TEST_CASE("sample_leaf uniform frequencies") {
    Rng rng(51);
    PhaseTree tree{TreeTopology(2)};
    const long shots = 100000;
    std::vector<long> counts(4, 0);
    for (long i = 0; i < shots; ++i) ++counts[static_cast<std::size_t>(tree.sample_leaf(rng) - 1)];
    for (long c : counts)
        CHECK(std::abs(static_cast<double>(c) / shots - 0.25) <= 0.01);
}

TEST_CASE("sample_leaf deterministic on fully pruned tree") {
    PhaseTree tree{TreeTopology(3)};
    for (int node = 0; node < tree.topology().node_count(); ++node)
        tree.set_prune_at(node, PruneOverride::Lower);
    Rng rng(52);
    for (int i = 0; i < 32; ++i) CHECK(tree.sample_leaf(rng) == 8);
}

TEST_CASE("sample_leaf matches programmed distribution within multinomial bounds") {
    Rng rng(53);
    std::vector<double> q = {0.1, 0.25, 0.05, 0.6};
    PhaseTree tree = program_tree(q);
    const long shots = 100000;
    std::vector<long> counts(4, 0);
    for (long i = 0; i < shots; ++i) ++counts[static_cast<std::size_t>(tree.sample_leaf(rng) - 1)];
    for (std::size_t i = 0; i < q.size(); ++i) {
        double expect = q[i] * shots;
        double sd = std::sqrt(q[i] * (1.0 - q[i]) * shots);
        CHECK(std::abs(static_cast<double>(counts[i]) - expect) <= 3.0 * sd);
    }
}

TEST_CASE("sample_leaf chi-square goodness of fit") {
    // 20 random trees, 1e5 shots each, significance 0.001.
    Rng rng(54);
    for (int rep = 0; rep < 20; ++rep) {
        int depth = 1 + rng.uniform_int(3);
        int leaves = 1 << depth;
        std::vector<double> q(static_cast<std::size_t>(leaves));
        double sum = 0.0;
        for (double& v : q) sum += (v = 0.2 + rng.uniform01());
        for (double& v : q) v /= sum;
        PhaseTree tree = program_tree(q);

        const long shots = 100000;
        std::vector<long> counts(static_cast<std::size_t>(leaves), 0);
        for (long i = 0; i < shots; ++i)
            ++counts[static_cast<std::size_t>(tree.sample_leaf(rng) - 1)];
        double p = test_oracles::chi_square_p_value(counts, tree.leaf_distribution(), shots);
        CHECK(p > 0.001);
    }
}

TEST_CASE("per-shot noise spreads samples without breaking normalization") {
    Rng rng(55);
    PhaseTree tree = program_tree({0.9, 0.1});
    NoiseSpec noise{0.2, NoiseMode::PerShot};
    long upper = 0;
    const long shots = 20000;
    for (long i = 0; i < shots; ++i)
        if (tree.sample_leaf(rng, noise) == 1) ++upper;
    double freq = static_cast<double>(upper) / shots;
    CHECK(freq < 0.9);   // noise softens the saturated branch
    CHECK(freq > 0.75);
}
