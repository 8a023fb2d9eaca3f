#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "photonrl/envs/environment.hpp"

namespace photonrl {

using Cell = std::array<int, 3>;  // 1-based coordinates

// 3D grid maze. The agent starts at `start` and hunts a reward at `goal`;
// moves onto walls or beyond the border cost a time step without movement.
// An episode ends when the reward is obtained or `episode_cap` steps elapse.
struct GridSpec {
    int size_x = 10, size_y = 10, size_z = 10;
    Cell start{3, 1, 4};
    Cell goal{9, 9, 9};
    std::set<Cell> walls;
    double reward = 8.0;
    long episode_cap = 1000;

    bool in_bounds(const Cell& c) const {
        return c[0] >= 1 && c[0] <= size_x && c[1] >= 1 && c[1] <= size_y && c[2] >= 1 &&
               c[2] <= size_z;
    }
    int cell_index(const Cell& c) const {
        return (c[0] - 1) + size_x * ((c[1] - 1) + size_y * (c[2] - 1));
    }
    int cell_count() const { return size_x * size_y * size_z; }

    // Bounds, start/goal distinct from walls, goal reachable.
    void validate() const;
};

// Six axis moves, in this order.
enum GridAction : int { XPlus = 0, XMinus, YPlus, YMinus, ZPlus, ZMinus };
inline constexpr int kGridActionCount = 6;

// BFS shortest path length from start to goal under wall/border blocking.
// Throws if the goal is unreachable.
long min_path_length(const GridSpec& spec);

// Bernoulli wall layout at the given density, sparing start and goal. Throws
// if the draw disconnects the goal (pick another seed or lower the density).
std::set<Cell> random_walls(const GridSpec& base, double density, std::uint64_t seed);

class GridWorld3D final : public Environment {
public:
    explicit GridWorld3D(GridSpec spec);

    int reset() override;
    StepResult step(int action) override;
    int action_count() const override { return kGridActionCount; }
    int percept_count() const override { return spec_.cell_count(); }

    const GridSpec& spec() const { return spec_; }
    const Cell& position() const { return position_; }
    long steps_taken() const { return steps_; }

private:
    GridSpec spec_;
    Cell position_;
    long steps_ = 0;
    bool done_ = true;
};

}  // namespace photonrl
