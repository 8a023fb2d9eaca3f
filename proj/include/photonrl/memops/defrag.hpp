#pragma once

#include <functional>
#include <vector>

#include "photonrl/agents/clip_memory.hpp"

namespace photonrl {

// Schedule and ranking rule for memory defragmentation. The default statistic
// ranks actions by their cumulative reward tallies; a custom hook can replace
// it without touching the reassignment machinery.
struct DefragPolicy {
    long period = 0;  // trials between passes; 0 disables
    std::function<double(const ClipMemory&, int action)> statistic;

    bool enabled() const { return period > 0; }

    void validate() const {
        if (period < 0) throw std::invalid_argument("DefragPolicy: period must be >= 0");
    }

    double rank(const ClipMemory& m, int action) const {
        return statistic ? statistic(m, action) : m.cumulative_reward(action);
    }
};

// Permutation sorting actions by the ranking statistic, descending, stable on
// ties: element r is the action assigned to output mode r after the pass.
std::vector<int> defrag_ranking(const ClipMemory& memory, const DefragPolicy& policy = {});

// Re-sorts actions over the output modes by cumulative reward (or the
// policy's statistic): permutes the leaf-to-action map, reprograms the phases
// so every action keeps exactly its current selection probability, and
// rederives chi from the new angles. A no-op when the ranking permutation is
// the identity. Glow is cleared (branch signs refer to the old layout);
// tallies and confidence persist. Throws on memories with prune overrides.
void defragment(ClipMemory& memory, const DefragPolicy& policy = {});

}  // namespace photonrl
