#include "photonrl/envs/gridworld.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "photonrl/rng.hpp"

namespace photonrl {

namespace {

constexpr std::array<Cell, kGridActionCount> kMoves = {
    Cell{1, 0, 0}, Cell{-1, 0, 0}, Cell{0, 1, 0}, Cell{0, -1, 0}, Cell{0, 0, 1}, Cell{0, 0, -1}};

Cell shifted(const Cell& c, int action) {
    const Cell& d = kMoves[static_cast<std::size_t>(action)];
    return {c[0] + d[0], c[1] + d[1], c[2] + d[2]};
}

}  // namespace

void GridSpec::validate() const {
    if (size_x < 1 || size_y < 1 || size_z < 1)
        throw std::invalid_argument("GridSpec: dimensions must be positive");
    if (!in_bounds(start)) throw std::invalid_argument("GridSpec: start outside the grid");
    if (!in_bounds(goal)) throw std::invalid_argument("GridSpec: goal outside the grid");
    if (walls.count(start)) throw std::invalid_argument("GridSpec: start is a wall");
    if (walls.count(goal)) throw std::invalid_argument("GridSpec: goal is a wall");
    if (!std::isfinite(reward)) throw std::invalid_argument("GridSpec: reward must be finite");
    if (episode_cap < 1) throw std::invalid_argument("GridSpec: episode_cap must be >= 1");
    for (const Cell& w : walls)
        if (!in_bounds(w)) throw std::invalid_argument("GridSpec: wall outside the grid");
    min_path_length(*this);  // throws when the goal is unreachable
}

long min_path_length(const GridSpec& spec) {
    if (spec.start == spec.goal) return 0;
    std::vector<long> dist(static_cast<std::size_t>(spec.cell_count()), -1);
    std::deque<Cell> frontier{spec.start};
    dist[static_cast<std::size_t>(spec.cell_index(spec.start))] = 0;
    while (!frontier.empty()) {
        Cell c = frontier.front();
        frontier.pop_front();
        long d = dist[static_cast<std::size_t>(spec.cell_index(c))];
        for (int a = 0; a < kGridActionCount; ++a) {
            Cell nc = shifted(c, a);
            if (!spec.in_bounds(nc) || spec.walls.count(nc)) continue;
            long& nd = dist[static_cast<std::size_t>(spec.cell_index(nc))];
            if (nd >= 0) continue;
            nd = d + 1;
            if (nc == spec.goal) return nd;
            frontier.push_back(nc);
        }
    }
    throw std::invalid_argument("min_path_length: goal unreachable from start");
}

std::set<Cell> random_walls(const GridSpec& base, double density, std::uint64_t seed) {
    if (density < 0.0 || density >= 1.0)
        throw std::invalid_argument("random_walls: density must be in [0, 1)");
    Rng rng(seed);
    std::set<Cell> walls;
    for (int z = 1; z <= base.size_z; ++z)
        for (int y = 1; y <= base.size_y; ++y)
            for (int x = 1; x <= base.size_x; ++x) {
                Cell c{x, y, z};
                if (c == base.start || c == base.goal) continue;
                if (rng.uniform01() < density) walls.insert(c);
            }
    GridSpec withWalls = base;
    withWalls.walls = walls;
    try {
        min_path_length(withWalls);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(
            "random_walls: layout disconnects the goal (seed " + std::to_string(seed) +
            ", density " + std::to_string(density) + "); choose another seed or density");
    }
    return walls;
}

GridWorld3D::GridWorld3D(GridSpec spec) : spec_(std::move(spec)), position_(spec_.start) {
    spec_.validate();
}

int GridWorld3D::reset() {
    position_ = spec_.start;
    steps_ = 0;
    done_ = false;
    return spec_.cell_index(position_);
}

StepResult GridWorld3D::step(int action) {
    if (done_) throw std::logic_error("GridWorld3D: step() after episode end (call reset())");
    if (action < 0 || action >= kGridActionCount)
        throw std::out_of_range("GridWorld3D: action " + std::to_string(action) + " out of range");
    Cell target = shifted(position_, action);
    if (spec_.in_bounds(target) && !spec_.walls.count(target)) position_ = target;
    ++steps_;
    StepResult out;
    out.percept = spec_.cell_index(position_);
    if (position_ == spec_.goal) {
        out.reward = spec_.reward;
        out.done = true;
    } else if (steps_ >= spec_.episode_cap) {
        out.reward = 0.0;
        out.done = true;
    }
    done_ = out.done;
    return out;
}

}  // namespace photonrl
