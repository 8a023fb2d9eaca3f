#include "photonrl/memops/defrag.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace photonrl {

std::vector<int> defrag_ranking(const ClipMemory& memory, const DefragPolicy& policy) {
    std::vector<int> order(static_cast<std::size_t>(memory.action_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return policy.rank(memory, a) > policy.rank(memory, b);
    });
    return order;
}

void defragment(ClipMemory& memory, const DefragPolicy& policy) {
    if (memory.tree().has_prunes())
        throw std::logic_error("defragment: not defined on memories with prune overrides");

    std::vector<int> order = defrag_ranking(memory, policy);

    bool identity = true;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (memory.leaf_of_action(order[r]) != static_cast<int>(r) + 1) {
            identity = false;
            break;
        }
    }
    if (identity) return;

    // Mode r inherits the selection probability of the action now ranked r;
    // unassigned leaves keep their mass in place.
    std::vector<double> q_old = memory.tree().leaf_distribution();
    std::vector<double> q_new = q_old;
    std::vector<int> action_of_leaf(static_cast<std::size_t>(memory.leaf_count()), -1);
    for (std::size_t r = 0; r < order.size(); ++r) {
        int action = order[r];
        q_new[r] = q_old[static_cast<std::size_t>(memory.leaf_of_action(action) - 1)];
        action_of_leaf[r] = action;
    }
    memory.overwrite_policy(q_new, action_of_leaf);
}

}  // namespace photonrl
