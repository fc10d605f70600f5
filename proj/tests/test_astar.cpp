#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmpath/astar.hpp"
#include "swarmpath/rng.hpp"

using namespace swarmpath;
using testing::diagonal_cuts_corner;
using testing::dijkstra_oracle;
using testing::DijkstraResult;

namespace {

GridMap empty_grid(int w, int h, double cell = 1.0) {
    GridMap g;
    g.cell_size = cell;
    g.width = w;
    g.height = h;
    g.origin = {0, 0};
    g.blocked.assign(static_cast<std::size_t>(w) * h, 0);
    return g;
}

}  // namespace

TEST_CASE("pure diagonal across an empty 5x5 grid") {
    const GridMap g = empty_grid(5, 5, 2.0);
    const GridPath path = astar(g, {0, 0}, {4, 4});
    CHECK(path.cost == doctest::Approx(4 * kSqrt2 * 2.0));
    CHECK(path.straight_steps == 0);
    CHECK(path.diagonal_steps == 4);
    CHECK(path.cells.size() == 5);
}

TEST_CASE("start equals goal: single-cell path, zero cost") {
    const GridMap g = empty_grid(3, 3);
    const GridPath path = astar(g, {1, 1}, {1, 1});
    CHECK(path.cost == 0.0);
    REQUIRE(path.cells.size() == 1);
    CHECK(path.cells[0] == GridCell{1, 1});
}

TEST_CASE("unreachable goal raises no-path") {
    GridMap g = empty_grid(5, 5);
    for (int r = 0; r < 5; ++r) g.set_blocked(2, r, true);  // solid wall
    CHECK_THROWS_AS(astar(g, {0, 2}, {4, 2}), NoPathError);
}

TEST_CASE("astar matches the Dijkstra oracle exactly on 100 random grids") {
    RngStream rng(1701, 0);
    int solved = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridMap g = empty_grid(20, 20);
        for (int r = 0; r < 20; ++r)
            for (int c = 0; c < 20; ++c)
                if (rng.next_unit() < 0.30) g.set_blocked(c, r, true);
        g.set_blocked(0, 0, false);
        g.set_blocked(19, 19, false);

        const DijkstraResult oracle = dijkstra_oracle(g, {0, 0}, {19, 19});
        if (!oracle.reachable) {
            CHECK_THROWS_AS(astar(g, {0, 0}, {19, 19}), NoPathError);
            continue;
        }
        const GridPath path = astar(g, {0, 0}, {19, 19});
        CHECK(path.cost == oracle.cost);  // exact, not approximate
        ++solved;

        // Path validity: 8-adjacent, unblocked, never cutting corners.
        for (std::size_t i = 1; i < path.cells.size(); ++i) {
            const GridCell a = path.cells[i - 1], b = path.cells[i];
            CHECK(std::abs(a.col - b.col) <= 1);
            CHECK(std::abs(a.row - b.row) <= 1);
            CHECK(!(a == b));
            CHECK(!g.is_blocked(b.col, b.row));
            CHECK(!diagonal_cuts_corner(g, a, b));
        }
        // Declared step counts match the traversed path.
        int straight = 0, diag = 0;
        for (std::size_t i = 1; i < path.cells.size(); ++i) {
            const bool d = path.cells[i].col != path.cells[i - 1].col &&
                           path.cells[i].row != path.cells[i - 1].row;
            (d ? diag : straight) += 1;
        }
        CHECK(straight == path.straight_steps);
        CHECK(diag == path.diagonal_steps);
    }
    CHECK(solved > 20);  // the 30% density leaves most instances solvable
}

TEST_CASE("cost never increases when obstacles are removed") {
    RngStream rng(42, 7);
    for (int trial = 0; trial < 20; ++trial) {
        GridMap dense = empty_grid(15, 15);
        for (int r = 0; r < 15; ++r)
            for (int c = 0; c < 15; ++c)
                if (rng.next_unit() < 0.25) dense.set_blocked(c, r, true);
        dense.set_blocked(0, 0, false);
        dense.set_blocked(14, 14, false);

        GridMap sparse = dense;
        for (int r = 0; r < 15; ++r)
            for (int c = 0; c < 15; ++c)
                if (sparse.is_blocked(c, r) && rng.next_unit() < 0.5)
                    sparse.set_blocked(c, r, false);

        double dense_cost = -1.0, sparse_cost = -1.0;
        try {
            dense_cost = astar(dense, {0, 0}, {14, 14}).cost;
        } catch (const NoPathError&) {
        }
        try {
            sparse_cost = astar(sparse, {0, 0}, {14, 14}).cost;
        } catch (const NoPathError&) {
        }
        if (dense_cost >= 0.0) {
            REQUIRE(sparse_cost >= 0.0);  // removing obstacles keeps it solvable
            CHECK(sparse_cost <= dense_cost + 1e-12);
        }
    }
}

TEST_CASE("astar_world_length: open corridor close to the straight-line distance") {
    ArenaConfig arena;
    arena.bounds = {{0, 0}, {300, 300}};
    arena.nest = {50, 150};
    arena.goal = {150, 150};
    SimParams params;
    const double len = astar_world_length(arena, params);
    CHECK(len >= 100.0 - params.robot_radius);
    CHECK(len <= 100.0 + params.robot_radius);
}

TEST_CASE("astar_world_length: walled-in nest has no path") {
    ArenaConfig arena;
    arena.bounds = {{0, 0}, {300, 300}};
    arena.nest = {50, 150};
    arena.goal = {250, 150};
    // Box around the nest with no gap, clear of the nest cell itself.
    arena.obstacles = {{{20, 110}, {80, 120}},
                       {{20, 180}, {80, 190}},
                       {{20, 120}, {30, 180}},
                       {{70, 120}, {80, 180}}};
    SimParams params;
    CHECK_THROWS_AS(astar_world_length(arena, params), NoPathError);
}

TEST_CASE("bundled open_1 reference length fixture") {
    const auto envs = builtin_environments();
    REQUIRE(envs[0].name == "open_1");
    const double len = astar_world_length(envs[0].arena, envs[0].params);
    // Straight 160-unit corridor; grid discretization adds at most one cell.
    CHECK(len >= 160.0 - envs[0].params.robot_radius);
    CHECK(len <= 160.0 + 2.0 * envs[0].params.robot_radius);
}
