#pragma once
// Scenario model: world geometry, tunable parameters, JSON load/emit,
// the eight bundled environments, and grid rasterization for the
// A* baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmpath/errors.hpp"
#include "swarmpath/geometry.hpp"

namespace swarmpath {

enum class EnvironmentClass { Open, Obstacle, Complex };

inline const char* to_string(EnvironmentClass c) {
    switch (c) {
        case EnvironmentClass::Open: return "open";
        case EnvironmentClass::Obstacle: return "obstacle";
        case EnvironmentClass::Complex: return "complex";
    }
    return "?";
}

inline EnvironmentClass environment_class_from_string(const std::string& s) {
    if (s == "open") return EnvironmentClass::Open;
    if (s == "obstacle") return EnvironmentClass::Obstacle;
    if (s == "complex") return EnvironmentClass::Complex;
    throw ParseError("unknown environment class '" + s + "'");
}

struct ArenaConfig {
    Rect bounds;
    std::vector<Obstacle> obstacles;
    Point2 nest;
    double nest_radius = 15.0;
    Point2 goal;
    double goal_radius = 10.0;
    std::vector<Point2> deployment_points;
    EnvironmentClass environment_class = EnvironmentClass::Open;

    friend bool operator==(const ArenaConfig&, const ArenaConfig&) = default;
};

/// All simulation tunables. Distances are world units (1 unit = 1 cm
/// nominal), durations are ticks, speeds are units per tick.
struct SimParams {
    double detect_range = 30.0;        // beacon/goal detection radius
    double subgoal_spacing = 70.0;     // freeze distance from the tracked beacon
    double max_visible_range = 100.0;  // LED camera / nest / goal visibility
    double repulsion_range = 20.0;     // recovery-robot repulsion radius
    double robot_speed = 1.0;
    double robot_radius = 3.5;
    double proximity_range = 10.0;
    double comm_range = 100.0;
    int delta = 2;                     // complexity slack added to the robot estimate
    long min_explore_time = 500;
    long explore_time_increment = 250;
    long rest_duration = 30000;
    long max_sim_steps = 30000;
    double opt_error_tolerance = 0.05;  // radians
    std::uint64_t rng_seed = 0;

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct Scenario {
    std::string name;
    ArenaConfig arena;
    SimParams params;
    int robot_count = 100;
};

struct GridMap {
    double cell_size = 1.0;
    int width = 0;
    int height = 0;
    Point2 origin;  // world coordinates of cell (0,0)'s min corner
    std::vector<std::uint8_t> blocked;

    bool is_blocked(int col, int row) const {
        if (col < 0 || row < 0 || col >= width || row >= height) return true;
        return blocked[static_cast<std::size_t>(row) * width + col] != 0;
    }
    void set_blocked(int col, int row, bool b) {
        blocked[static_cast<std::size_t>(row) * width + col] = b ? 1 : 0;
    }
    /// Cell containing a world point (points on the max edge clamp inward).
    std::pair<int, int> cell_of(Point2 p) const {
        int col = static_cast<int>(std::floor((p.x - origin.x) / cell_size));
        int row = static_cast<int>(std::floor((p.y - origin.y) / cell_size));
        col = std::clamp(col, 0, width - 1);
        row = std::clamp(row, 0, height - 1);
        return {col, row};
    }
    Rect cell_rect(int col, int row) const {
        return {{origin.x + col * cell_size, origin.y + row * cell_size},
                {origin.x + (col + 1) * cell_size, origin.y + (row + 1) * cell_size}};
    }
};

// -------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(bool cond, const std::string& field, const std::string& msg) {
    if (!cond) throw ValidationError(field, msg);
}

inline bool inside_any_obstacle(Point2 p, const std::vector<Obstacle>& obs) {
    for (const auto& ob : obs)
        if (ob.contains(p)) return true;
    return false;
}

}  // namespace detail

/// Check all ArenaConfig / SimParams invariants; throws ValidationError
/// naming the offending field.
inline void validate_scenario(const Scenario& sc) {
    using detail::require;
    const ArenaConfig& a = sc.arena;
    const SimParams& p = sc.params;

    require(a.bounds.valid(), "arena.bounds", "must have positive area");
    for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
        const std::string f = "arena.obstacles[" + std::to_string(i) + "]";
        require(a.obstacles[i].valid(), f, "must have positive area");
        require(a.bounds.contains_rect(a.obstacles[i]), f, "must lie inside bounds");
    }
    require(a.nest_radius > 0.0, "arena.nest.radius", "must be positive");
    require(a.goal_radius > 0.0, "arena.goal.radius", "must be positive");
    require(a.bounds.contains(a.nest), "arena.nest", "must lie inside bounds");
    require(!detail::inside_any_obstacle(a.nest, a.obstacles), "arena.nest",
            "must lie outside all obstacles");
    require(a.bounds.contains(a.goal), "arena.goal", "must lie inside bounds");
    require(!detail::inside_any_obstacle(a.goal, a.obstacles), "arena.goal",
            "must lie outside all obstacles");
    for (std::size_t i = 0; i < a.deployment_points.size(); ++i) {
        const std::string f = "arena.deployment_points[" + std::to_string(i) + "]";
        require(a.bounds.contains(a.deployment_points[i]), f, "must lie inside bounds");
        require(!detail::inside_any_obstacle(a.deployment_points[i], a.obstacles), f,
                "must lie outside all obstacles");
    }

    require(p.detect_range > 0.0, "params.detect_range", "must be positive");
    require(p.detect_range < p.subgoal_spacing, "params.subgoal_spacing",
            "must exceed detect_range");
    require(p.subgoal_spacing < p.max_visible_range, "params.max_visible_range",
            "must exceed subgoal_spacing");
    require(p.repulsion_range > 0.0, "params.repulsion_range", "must be positive");
    require(p.robot_speed > 0.0, "params.robot_speed", "must be positive");
    require(p.robot_radius > 0.0, "params.robot_radius", "must be positive");
    require(p.delta >= 0, "params.delta", "must be non-negative");
    require(p.max_sim_steps > 0, "params.max_sim_steps", "must be positive");

    require(sc.robot_count >= 0, "robots.count", "must be non-negative");
    require(sc.robot_count <= static_cast<int>(a.deployment_points.size()),
            "robots.count", "exceeds available deployment points");
}

// -------------------------------------------------------------------------
// JSON load / emit

namespace detail {

inline Point2 point_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(field + ": expected [x, y]");
    Point2 p{j[0].get<double>(), j[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ParseError(field + ": coordinates must be finite");
    return p;
}

inline Rect rect_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("min") || !j.contains("max"))
        throw ParseError(field + ": expected {min: [x,y], max: [x,y]}");
    return {point_from_json(j["min"], field + ".min"),
            point_from_json(j["max"], field + ".max")};
}

inline nlohmann::json to_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

inline nlohmann::json to_json(const Rect& r) {
    return {{"min", to_json(r.min_corner)}, {"max", to_json(r.max_corner)}};
}

template <typename T>
void read_param(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline int default_delta(EnvironmentClass c) {
    switch (c) {
        case EnvironmentClass::Open: return 2;
        case EnvironmentClass::Obstacle: return 4;
        case EnvironmentClass::Complex: return 6;
    }
    return 2;
}

/// Parse a scenario document. Throws ParseError on malformed input and
/// ValidationError (with field path) on invariant violations.
inline Scenario load_scenario(const std::string& text, const std::string& name = "") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("arena"))
        throw ParseError("document must be an object with an 'arena' key");

    Scenario sc;
    sc.name = name;
    try {
        const auto& ja = doc["arena"];
        sc.arena.bounds = detail::rect_from_json(ja.at("bounds"), "arena.bounds");
        if (ja.contains("obstacles")) {
            int i = 0;
            for (const auto& jo : ja["obstacles"]) {
                sc.arena.obstacles.push_back(detail::rect_from_json(
                    jo, "arena.obstacles[" + std::to_string(i++) + "]"));
            }
        }
        sc.arena.nest = detail::point_from_json(ja.at("nest").at("pos"), "arena.nest.pos");
        sc.arena.nest_radius = ja.at("nest").value("radius", 15.0);
        sc.arena.goal = detail::point_from_json(ja.at("goal").at("pos"), "arena.goal.pos");
        sc.arena.goal_radius = ja.at("goal").value("radius", 10.0);
        if (ja.contains("deployment_points")) {
            int i = 0;
            for (const auto& jp : ja["deployment_points"]) {
                sc.arena.deployment_points.push_back(detail::point_from_json(
                    jp, "arena.deployment_points[" + std::to_string(i++) + "]"));
            }
        }
        sc.arena.environment_class =
            environment_class_from_string(ja.value("class", std::string("open")));

        sc.params.delta = default_delta(sc.arena.environment_class);
        if (doc.contains("params")) {
            const auto& jp = doc["params"];
            detail::read_param(jp, "detect_range", sc.params.detect_range);
            detail::read_param(jp, "subgoal_spacing", sc.params.subgoal_spacing);
            detail::read_param(jp, "max_visible_range", sc.params.max_visible_range);
            detail::read_param(jp, "repulsion_range", sc.params.repulsion_range);
            detail::read_param(jp, "robot_speed", sc.params.robot_speed);
            detail::read_param(jp, "robot_radius", sc.params.robot_radius);
            detail::read_param(jp, "proximity_range", sc.params.proximity_range);
            detail::read_param(jp, "comm_range", sc.params.comm_range);
            detail::read_param(jp, "delta", sc.params.delta);
            detail::read_param(jp, "min_explore_time", sc.params.min_explore_time);
            detail::read_param(jp, "explore_time_increment", sc.params.explore_time_increment);
            detail::read_param(jp, "rest_duration", sc.params.rest_duration);
            detail::read_param(jp, "max_sim_steps", sc.params.max_sim_steps);
            detail::read_param(jp, "opt_error_tolerance", sc.params.opt_error_tolerance);
            detail::read_param(jp, "rng_seed", sc.params.rng_seed);
        }
        if (doc.contains("robots")) sc.robot_count = doc["robots"].value("count", 100);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema error: ") + e.what());
    }

    validate_scenario(sc);
    return sc;
}

inline nlohmann::json params_to_json(const SimParams& p) {
    return {
        {"detect_range", p.detect_range},
        {"subgoal_spacing", p.subgoal_spacing},
        {"max_visible_range", p.max_visible_range},
        {"repulsion_range", p.repulsion_range},
        {"robot_speed", p.robot_speed},
        {"robot_radius", p.robot_radius},
        {"proximity_range", p.proximity_range},
        {"comm_range", p.comm_range},
        {"delta", p.delta},
        {"min_explore_time", p.min_explore_time},
        {"explore_time_increment", p.explore_time_increment},
        {"rest_duration", p.rest_duration},
        {"max_sim_steps", p.max_sim_steps},
        {"opt_error_tolerance", p.opt_error_tolerance},
        {"rng_seed", p.rng_seed},
    };
}

/// Emit a scenario document that load_scenario() round-trips exactly.
inline std::string emit_scenario(const Scenario& sc) {
    nlohmann::json ja;
    ja["bounds"] = detail::to_json(sc.arena.bounds);
    ja["obstacles"] = nlohmann::json::array();
    for (const auto& ob : sc.arena.obstacles) ja["obstacles"].push_back(detail::to_json(ob));
    ja["nest"] = {{"pos", detail::to_json(sc.arena.nest)}, {"radius", sc.arena.nest_radius}};
    ja["goal"] = {{"pos", detail::to_json(sc.arena.goal)}, {"radius", sc.arena.goal_radius}};
    ja["deployment_points"] = nlohmann::json::array();
    for (const auto& dp : sc.arena.deployment_points)
        ja["deployment_points"].push_back(detail::to_json(dp));
    ja["class"] = to_string(sc.arena.environment_class);

    nlohmann::json doc = {{"arena", ja},
                          {"params", params_to_json(sc.params)},
                          {"robots", {{"count", sc.robot_count}}}};
    return doc.dump(2) + "\n";
}

// -------------------------------------------------------------------------
// Bundled environments

namespace detail {

/// 10x10 grid of deployment points around the nest, one per robot,
/// spaced 2.5 robot radii apart.
inline std::vector<Point2> deployment_grid(Point2 nest, double robot_radius, int count) {
    const double spacing = 2.5 * robot_radius;
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    std::vector<Point2> pts;
    pts.reserve(count);
    const double offset = (side - 1) / 2.0;
    for (int row = 0; row < side && static_cast<int>(pts.size()) < count; ++row) {
        for (int col = 0; col < side && static_cast<int>(pts.size()) < count; ++col) {
            pts.push_back({nest.x + (col - offset) * spacing, nest.y + (row - offset) * spacing});
        }
    }
    return pts;
}

inline Scenario make_environment(std::string name, EnvironmentClass cls, Rect bounds,
                                 Point2 nest, Point2 goal, std::vector<Obstacle> obstacles) {
    Scenario sc;
    sc.name = std::move(name);
    sc.arena.bounds = bounds;
    sc.arena.obstacles = std::move(obstacles);
    sc.arena.nest = nest;
    sc.arena.nest_radius = 15.0;
    sc.arena.goal = goal;
    sc.arena.goal_radius = 10.0;
    sc.arena.environment_class = cls;
    sc.params.delta = default_delta(cls);
    sc.robot_count = 100;
    sc.arena.deployment_points = deployment_grid(nest, sc.params.robot_radius, 100);
    return sc;
}

}  // namespace detail

/// The eight bundled environments: three open, three obstacle, two complex.
/// These are reconstructions by class; layouts keep the nest-goal straight
/// line in the 160-200 unit range.
inline std::vector<Scenario> builtin_environments() {
    using detail::make_environment;
    using EC = EnvironmentClass;
    std::vector<Scenario> envs;

    envs.push_back(make_environment("open_1", EC::Open, {{0, 0}, {400, 400}},
                                    {120, 200}, {280, 200}, {}));
    envs.push_back(make_environment("open_2", EC::Open, {{0, 0}, {420, 420}},
                                    {110, 110}, {240, 240}, {}));
    envs.push_back(make_environment("open_3", EC::Open, {{0, 0}, {380, 380}},
                                    {190, 90}, {190, 280}, {}));

    envs.push_back(make_environment("obstacle_1", EC::Obstacle, {{0, 0}, {400, 400}},
                                    {100, 200}, {300, 200},
                                    {{{195, 140}, {210, 260}}}));
    envs.push_back(make_environment("obstacle_2", EC::Obstacle, {{0, 0}, {420, 420}},
                                    {110, 210}, {310, 210},
                                    {{{180, 100}, {195, 230}}, {{240, 190}, {255, 330}}}));
    envs.push_back(make_environment("obstacle_3", EC::Obstacle, {{0, 0}, {400, 400}},
                                    {200, 100}, {200, 300},
                                    {{{120, 190}, {230, 205}}, {{250, 190}, {330, 205}}}));

    envs.push_back(make_environment("complex_1", EC::Complex, {{0, 0}, {500, 500}},
                                    {100, 250}, {400, 250},
                                    {{{170, 150}, {185, 350}},
                                     {{250, 60}, {265, 250}},
                                     {{330, 250}, {345, 440}}}));
    envs.push_back(make_environment("complex_2", EC::Complex, {{0, 0}, {500, 500}},
                                    {250, 90}, {250, 410},
                                    {{{120, 170}, {330, 185}}, {{170, 300}, {380, 315}}}));

    for (const auto& sc : envs) validate_scenario(sc);
    return envs;
}

// -------------------------------------------------------------------------
// Rasterization

/// Rasterize the arena onto a grid. A cell is blocked iff its rectangle
/// has positive-area overlap with any obstacle inflated by `inflation`,
/// or the cell is not fully inside the bounds. Throws ValidationError
/// when the nest or goal cell ends up blocked.
inline GridMap rasterize(const ArenaConfig& arena, double cell_size, double inflation) {
    detail::require(cell_size > 0.0, "cell_size", "must be positive");
    detail::require(inflation >= 0.0, "inflation", "must be non-negative");

    GridMap grid;
    grid.cell_size = cell_size;
    grid.origin = arena.bounds.min_corner;
    grid.width = static_cast<int>(std::ceil(arena.bounds.width() / cell_size));
    grid.height = static_cast<int>(std::ceil(arena.bounds.height() / cell_size));
    grid.blocked.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);

    std::vector<Rect> inflated;
    inflated.reserve(arena.obstacles.size());
    for (const auto& ob : arena.obstacles) inflated.push_back(ob.inflated(inflation));

    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            const Rect cell = grid.cell_rect(col, row);
            bool blocked = !arena.bounds.contains_rect(cell);
            for (const auto& ob : inflated) {
                if (blocked) break;
                blocked = ob.overlaps(cell);
            }
            grid.set_blocked(col, row, blocked);
        }
    }

    const auto [ncol, nrow] = grid.cell_of(arena.nest);
    detail::require(!grid.is_blocked(ncol, nrow), "arena.nest",
                    "nest cell is blocked on the planning grid");
    const auto [gcol, grow] = grid.cell_of(arena.goal);
    detail::require(!grid.is_blocked(gcol, grow), "arena.goal",
                    "goal cell is blocked on the planning grid");
    return grid;
}

}  // namespace swarmpath
