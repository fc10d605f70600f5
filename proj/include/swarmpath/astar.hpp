#pragma once
// Grid A* reference planner: 8-connected, octile step costs, no corner
// cutting, deterministic tie-breaking. Path costs are tracked as integer
// (straight, diagonal) step counts and converted to length once, so two
// optimal planners always agree bit-for-bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "swarmpath/arena.hpp"
#include "swarmpath/errors.hpp"
#include "swarmpath/geometry.hpp"

namespace swarmpath {

inline constexpr double kSqrt2 = 1.41421356237309504880;

struct GridCell {
    int col = 0;
    int row = 0;
    friend bool operator==(GridCell a, GridCell b) { return a.col == b.col && a.row == b.row; }
};

struct GridPath {
    std::vector<GridCell> cells;  // start .. goal, consecutive cells 8-adjacent
    int straight_steps = 0;
    int diagonal_steps = 0;
    double cost = 0.0;  // world units: (straight + sqrt(2) * diagonal) * cell_size
};

/// Canonical cost of a step-count pair, in world units.
inline double step_cost(int straight, int diagonal, double cell_size) {
    return (static_cast<double>(straight) + kSqrt2 * static_cast<double>(diagonal)) * cell_size;
}

namespace detail {

struct AstarNode {
    double f;
    double g;
    std::int64_t index;  // row-major cell order
};

struct AstarNodeOrder {
    // Min-heap on (f, then larger g, then row-major order).
    bool operator()(const AstarNode& a, const AstarNode& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return a.index > b.index;
    }
};

inline double octile_heuristic(GridCell a, GridCell b, double cell_size) {
    const int dx = std::abs(a.col - b.col);
    const int dy = std::abs(a.row - b.row);
    const int diag = std::min(dx, dy);
    return step_cost(dx + dy - 2 * diag, diag, cell_size);
}

}  // namespace detail

/// Minimum-cost 8-connected path under octile costs. Diagonal moves are
/// legal only when both orthogonal neighbors are free, so a disc robot
/// never squeezes through an obstacle corner. Throws NoPathError when
/// the goal is unreachable.
inline GridPath astar(const GridMap& grid, GridCell start, GridCell goal) {
    if (grid.is_blocked(start.col, start.row))
        throw NoPathError("start cell is blocked");
    if (grid.is_blocked(goal.col, goal.row))
        throw NoPathError("goal cell is blocked");

    const std::int64_t n = static_cast<std::int64_t>(grid.width) * grid.height;
    auto index_of = [&](GridCell c) {
        return static_cast<std::int64_t>(c.row) * grid.width + c.col;
    };

    std::vector<int> straight(n, -1), diagonal(n, -1);
    std::vector<std::int64_t> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    std::priority_queue<detail::AstarNode, std::vector<detail::AstarNode>,
                        detail::AstarNodeOrder>
        open;

    const std::int64_t start_idx = index_of(start);
    straight[start_idx] = 0;
    diagonal[start_idx] = 0;
    open.push({detail::octile_heuristic(start, goal, grid.cell_size), 0.0, start_idx});

    const std::int64_t goal_idx = index_of(goal);
    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const auto node = open.top();
        open.pop();
        if (closed[node.index]) continue;
        closed[node.index] = 1;
        if (node.index == goal_idx) break;

        const GridCell cell{static_cast<int>(node.index % grid.width),
                            static_cast<int>(node.index / grid.width)};
        for (int k = 0; k < 8; ++k) {
            const GridCell next{cell.col + kDx[k], cell.row + kDy[k]};
            if (grid.is_blocked(next.col, next.row)) continue;
            const bool diag = kDx[k] != 0 && kDy[k] != 0;
            if (diag && (grid.is_blocked(cell.col + kDx[k], cell.row) ||
                         grid.is_blocked(cell.col, cell.row + kDy[k])))
                continue;  // corner cutting forbidden

            const std::int64_t ni = index_of(next);
            if (closed[ni]) continue;
            const int ns = straight[node.index] + (diag ? 0 : 1);
            const int nd = diagonal[node.index] + (diag ? 1 : 0);
            const double ng = step_cost(ns, nd, grid.cell_size);
            const double old_g =
                straight[ni] < 0 ? -1.0 : step_cost(straight[ni], diagonal[ni], grid.cell_size);
            if (old_g >= 0.0 && ng >= old_g) continue;
            straight[ni] = ns;
            diagonal[ni] = nd;
            parent[ni] = node.index;
            open.push({ng + detail::octile_heuristic(next, goal, grid.cell_size), ng, ni});
        }
    }

    if (straight[goal_idx] < 0 || !closed[goal_idx])
        throw NoPathError("goal unreachable on the planning grid");

    GridPath path;
    path.straight_steps = straight[goal_idx];
    path.diagonal_steps = diagonal[goal_idx];
    path.cost = step_cost(path.straight_steps, path.diagonal_steps, grid.cell_size);
    for (std::int64_t i = goal_idx; i >= 0; i = parent[i]) {
        path.cells.push_back({static_cast<int>(i % grid.width), static_cast<int>(i / grid.width)});
        if (i == start_idx) break;
    }
    std::reverse(path.cells.begin(), path.cells.end());
    return path;
}

/// Rasterize with the default discretization (cell size and inflation both
/// one robot radius), plan nest -> goal, and return the cost in world
/// units. Feeds the A* comparison column of the experiment summaries.
inline double astar_world_length(const ArenaConfig& arena, const SimParams& params) {
    const GridMap grid = rasterize(arena, params.robot_radius, params.robot_radius);
    const auto [ncol, nrow] = grid.cell_of(arena.nest);
    const auto [gcol, grow] = grid.cell_of(arena.goal);
    return astar(grid, {ncol, nrow}, {gcol, grow}).cost;
}

}  // namespace swarmpath
