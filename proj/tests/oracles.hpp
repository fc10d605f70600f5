#pragma once
// Test-only oracles, kept independent of the implementation paths they
// check: a plain Dijkstra planner over the same move rules as the A*
// baseline, with the same integer step-count cost bookkeeping.

#include <queue>
#include <vector>

#include "swarmpath/astar.hpp"

namespace swarmpath::testing {

struct DijkstraResult {
    bool reachable = false;
    double cost = 0.0;
};

inline DijkstraResult dijkstra_oracle(const GridMap& grid, GridCell start, GridCell goal) {
    struct Node {
        double g;
        int idx;
        bool operator>(const Node& o) const { return g > o.g; }
    };
    const int n = grid.width * grid.height;
    std::vector<int> straight(n, -1), diagonal(n, -1);
    std::vector<char> done(n, 0);
    auto idx = [&](GridCell c) { return c.row * grid.width + c.col; };

    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    straight[idx(start)] = 0;
    diagonal[idx(start)] = 0;
    open.push({0.0, idx(start)});
    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const Node node = open.top();
        open.pop();
        if (done[node.idx]) continue;
        done[node.idx] = 1;
        const GridCell cell{node.idx % grid.width, node.idx / grid.width};
        for (int k = 0; k < 8; ++k) {
            const GridCell next{cell.col + kDx[k], cell.row + kDy[k]};
            if (grid.is_blocked(next.col, next.row)) continue;
            const bool diag = kDx[k] != 0 && kDy[k] != 0;
            if (diag && (grid.is_blocked(cell.col + kDx[k], cell.row) ||
                         grid.is_blocked(cell.col, cell.row + kDy[k])))
                continue;
            const int ni = idx(next);
            const int ns = straight[node.idx] + (diag ? 0 : 1);
            const int nd = diagonal[node.idx] + (diag ? 1 : 0);
            const double ng = step_cost(ns, nd, grid.cell_size);
            const double old_g =
                straight[ni] < 0 ? -1.0 : step_cost(straight[ni], diagonal[ni], grid.cell_size);
            if (old_g >= 0.0 && ng >= old_g) continue;
            straight[ni] = ns;
            diagonal[ni] = nd;
            open.push({ng, ni});
        }
    }
    if (straight[idx(goal)] < 0) return {false, 0.0};
    return {true, step_cost(straight[idx(goal)], diagonal[idx(goal)], grid.cell_size)};
}

inline bool diagonal_cuts_corner(const GridMap& grid, GridCell a, GridCell b) {
    const int dx = b.col - a.col, dy = b.row - a.row;
    if (dx == 0 || dy == 0) return false;
    return grid.is_blocked(a.col + dx, a.row) || grid.is_blocked(a.col, a.row + dy);
}

}  // namespace swarmpath::testing
