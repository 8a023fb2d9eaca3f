#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "photonrl/agents/clip_memory.hpp"
#include "photonrl/memops/defrag.hpp"
#include "photonrl/mesh/phase_tree.hpp"
#include "photonrl/rng.hpp"

using namespace photonrl;

namespace {

std::vector<double> action_probabilities(const ClipMemory& memory) {
    std::vector<double> q = memory.tree().leaf_distribution();
    std::vector<double> out(static_cast<std::size_t>(memory.action_count()));
    for (int a = 0; a < memory.action_count(); ++a)
        out[static_cast<std::size_t>(a)] = q[static_cast<std::size_t>(memory.leaf_of_action(a) - 1)];
    return out;
}

}  // namespace

TEST_CASE("reward tallies accumulate") {
    ClipMemory memory(4);
    memory.record_reward(2, 0.0);
    CHECK(memory.cumulative_reward(2) == 0.0);
    memory.record_reward(2, 0.025);
    memory.record_reward(2, 0.025);
    CHECK(memory.cumulative_reward(2) == doctest::Approx(0.05).epsilon(1e-15));

    Rng rng(5);
    double last = 0.0;
    for (int i = 0; i < 50; ++i) {
        memory.record_reward(1, rng.uniform01());
        CHECK(memory.cumulative_reward(1) >= last);
        last = memory.cumulative_reward(1);
    }
    CHECK_THROWS_AS(memory.record_reward(4, 1.0), std::out_of_range);
}

TEST_CASE("defrag is the identity on already-sorted tallies") {
    ClipMemory memory(4);
    memory.set_chi_at(0, 0.7);
    memory.set_chi_at(1, -0.3);
    memory.record_reward(0, 3.0);
    memory.record_reward(1, 2.0);
    memory.record_reward(2, 1.0);

    std::vector<double> chi_before;
    for (int n = 0; n < memory.topology().node_count(); ++n) chi_before.push_back(memory.chi_at(n));
    defragment(memory);
    for (int n = 0; n < memory.topology().node_count(); ++n)
        CHECK(memory.chi_at(n) == chi_before[static_cast<std::size_t>(n)]);
    for (int a = 0; a < 4; ++a) CHECK(memory.leaf_of_action(a) == a + 1);
}

TEST_CASE("defrag groups rewarded actions onto the first modes") {
    ClipMemory memory(4);
    memory.record_reward(1, 5.0);
    memory.record_reward(3, 5.0);
    defragment(memory);
    // Ranking (stable, descending): actions 1, 3 first, then 0, 2.
    CHECK(memory.leaf_of_action(1) == 1);
    CHECK(memory.leaf_of_action(3) == 2);
    CHECK(memory.leaf_of_action(0) == 3);
    CHECK(memory.leaf_of_action(2) == 4);
    CHECK(memory.action_of_leaf(1) == 1);
    CHECK(memory.action_of_leaf(2) == 3);
}

TEST_CASE("defrag preserves per-action probabilities") {
    Rng rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        int actions = 2 + rng.uniform_int(7);
        ClipMemory memory(actions);
        for (int node = 0; node < memory.topology().node_count(); ++node)
            memory.set_chi_at(node, (rng.uniform01() * 2.0 - 1.0) * 4.0);
        for (int a = 0; a < actions; ++a)
            memory.record_reward(a, rng.uniform01() < 0.25 ? 0.0 : rng.uniform01() * 3.0);

        std::vector<double> before = action_probabilities(memory);
        defragment(memory);
        std::vector<double> after = action_probabilities(memory);
        for (int a = 0; a < actions; ++a)
            CHECK(std::abs(after[static_cast<std::size_t>(a)] -
                           before[static_cast<std::size_t>(a)]) <= 1e-12);

        // The probability multiset over modes is permuted, not changed.
        std::vector<double> sorted_before = before;
        std::vector<double> sorted_after = after;
        std::sort(sorted_before.begin(), sorted_before.end());
        std::sort(sorted_after.begin(), sorted_after.end());
        for (std::size_t i = 0; i < sorted_before.size(); ++i)
            CHECK(std::abs(sorted_after[i] - sorted_before[i]) <= 1e-12);
    }
}

TEST_CASE("defrag is idempotent and keeps theta derived from chi") {
    Rng rng(18);
    ClipMemory memory(8);
    for (int node = 0; node < memory.topology().node_count(); ++node)
        memory.set_chi_at(node, (rng.uniform01() * 2.0 - 1.0) * 3.0);
    for (int a = 0; a < 8; ++a) memory.record_reward(a, rng.uniform01());

    defragment(memory);
    std::vector<double> chi_once, theta_once;
    for (int n = 0; n < memory.topology().node_count(); ++n) {
        chi_once.push_back(memory.chi_at(n));
        theta_once.push_back(memory.tree().theta_at(n));
        CHECK(std::abs(theta_of_chi(memory.chi_at(n)) - memory.tree().theta_at(n)) <= 1e-12);
    }
    defragment(memory);  // tallies unchanged: second pass is the identity
    for (int n = 0; n < memory.topology().node_count(); ++n) {
        CHECK(memory.chi_at(n) == chi_once[static_cast<std::size_t>(n)]);
        CHECK(memory.tree().theta_at(n) == theta_once[static_cast<std::size_t>(n)]);
    }
}

TEST_CASE("defrag clears glow and survives saturated distributions") {
    ClipMemory memory(4);
    memory.set_chi_at(0, 30.0);  // saturated splitter
    memory.set_chi_at(1, -30.0);
    memory.traverse_glow(1);
    memory.record_reward(3, 1.0);
    defragment(memory);
    for (int n = 0; n < memory.topology().node_count(); ++n) {
        CHECK(memory.glow_at(n) == 0.0);
        CHECK(std::isfinite(memory.chi_at(n)));
    }
    CHECK(memory.leaf_of_action(3) == 1);
}

TEST_CASE("prune forces a branch deterministically") {
    ClipMemory memory(2);
    memory.prune(1, 1, Branch::Upper);
    Rng rng(19);
    NoiseSpec off;
    for (int i = 0; i < 20; ++i) CHECK(memory.sample_leaf(rng, off) == 1);
    CHECK(memory.tree().leaf_probability(2) == 0.0);
    CHECK(memory.tree().leaf_probability(1) == 1.0);
}

TEST_CASE("pruned subtrees are excluded from updates and peakedness") {
    ClipMemory memory(4);
    memory.set_chi_at(2, 1.5);  // node (2,2), in the subtree to be cut
    memory.prune(1, 1, Branch::Upper);

    // Damping, rewards and path blends leave the cut subtree and the pruned
    // node untouched.
    memory.apply_damping(0.5);
    CHECK(memory.chi_at(2) == 1.5);
    memory.traverse_glow(1);
    memory.apply_reward(2.0);
    CHECK(memory.chi_at(2) == 1.5);
    CHECK(memory.chi_at(0) == 0.0);  // pruned node frozen
    CHECK(memory.chi_at(1) == 2.0);  // live node on the path still learns

    // Peakedness ignores unreachable leaves: mass sits on the live path.
    ClipMemory peaky(4);
    peaky.set_chi_at(2, 5.0);
    peaky.prune(1, 1, Branch::Upper);
    double m = peaky.peakedness();
    CHECK(m == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("prune refuses to disconnect every action") {
    ClipMemory memory(3);  // depth 2, leaf 4 unassigned
    memory.prune(1, 1, Branch::Lower);  // leaves 3 (action 2) and 4 remain
    CHECK_THROWS_AS(memory.prune(2, 2, Branch::Lower), std::logic_error);
    // The failed prune must not stick.
    CHECK(memory.leaf_is_reachable(3));
    Rng rng(20);
    NoiseSpec off;
    for (int i = 0; i < 10; ++i) CHECK(memory.sample_action(rng, off) == 2);
}

TEST_CASE("defragment rejects pruned memories") {
    ClipMemory memory(4);
    memory.prune(1, 1, Branch::Upper);
    memory.record_reward(1, 1.0);
    CHECK_THROWS_AS(defragment(memory), std::logic_error);
}

TEST_CASE("custom ranking statistic drives the permutation") {
    ClipMemory memory(4);
    memory.record_reward(0, 9.0);
    DefragPolicy policy;
    policy.period = 1;
    policy.statistic = [](const ClipMemory&, int action) {
        return static_cast<double>(action);  // highest action id first
    };
    defragment(memory, policy);
    CHECK(memory.leaf_of_action(3) == 1);
    CHECK(memory.leaf_of_action(0) == 4);
}
