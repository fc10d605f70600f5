#pragma once
// Chain extraction: recover the nest -> subgoals -> goal waypoint chain
// from frozen robot positions, by stage (red subgoals, blue sub-nests,
// cyan second-alignment members).

#include <optional>
#include <span>
#include <vector>

#include "swarmpath/arena.hpp"
#include "swarmpath/geometry.hpp"
#include "swarmpath/robot.hpp"

namespace swarmpath {

enum class ChainStage { Subgoal, Opt1, Opt2 };

inline const char* to_string(ChainStage s) {
    switch (s) {
        case ChainStage::Subgoal: return "subgoal";
        case ChainStage::Opt1: return "opt1";
        case ChainStage::Opt2: return "opt2";
    }
    return "?";
}

inline LedColor stage_color(ChainStage s) {
    switch (s) {
        case ChainStage::Subgoal: return LedColor::Red;
        case ChainStage::Opt1: return LedColor::Blue;
        case ChainStage::Opt2: return LedColor::Cyan;
    }
    return LedColor::Off;
}

struct Chain {
    std::vector<Point2> waypoints;  // nest, members..., goal
    std::vector<int> member_ids;    // robot ids of the members (waypoints minus endpoints)
};

inline double chain_length(const Chain& chain) {
    double total = 0.0;
    for (std::size_t i = 1; i < chain.waypoints.size(); ++i)
        total += distance(chain.waypoints[i - 1], chain.waypoints[i]);
    return total;
}

namespace detail {

inline bool waypoint_sees(Point2 from, Point2 to, const ArenaConfig& arena,
                          const SimParams& params) {
    return distance(from, to) <= params.max_visible_range &&
           line_of_sight(from, to, arena.obstacles);
}

}  // namespace detail

/// Greedy walk from the nest: repeatedly hop to the stage-colored robot
/// visible from the current waypoint that lies nearest to the goal (ties
/// to the lower id), until the goal itself is visible. Empty when the
/// walk cannot make progress.
inline std::optional<Chain> extract_chain(std::span<const RobotSnapshot> robots,
                                          const ArenaConfig& arena, const SimParams& params,
                                          ChainStage stage) {
    const LedColor want = stage_color(stage);
    Chain chain;
    chain.waypoints.push_back(arena.nest);

    std::vector<std::uint8_t> used(robots.size(), 0);
    Point2 current = arena.nest;
    // Each hop consumes at least one member, so the walk is bounded.
    for (std::size_t hops = 0; hops <= robots.size(); ++hops) {
        if (detail::waypoint_sees(current, arena.goal, arena, params)) {
            chain.waypoints.push_back(arena.goal);
            return chain;
        }
        int best = -1;
        double best_goal_dist = 0.0;
        for (std::size_t i = 0; i < robots.size(); ++i) {
            if (used[i] || robots[i].led != want) continue;
            const Point2 pos = robots[i].pose.position;
            if (!detail::waypoint_sees(current, pos, arena, params)) continue;
            const double gd = distance(pos, arena.goal);
            if (best < 0 || gd < best_goal_dist ||
                (gd == best_goal_dist && robots[i].id < robots[best].id)) {
                best = static_cast<int>(i);
                best_goal_dist = gd;
            }
        }
        if (best < 0) return std::nullopt;  // chain incomplete
        used[best] = 1;
        current = robots[best].pose.position;
        chain.waypoints.push_back(current);
        chain.member_ids.push_back(robots[best].id);
    }
    return std::nullopt;
}

}  // namespace swarmpath
