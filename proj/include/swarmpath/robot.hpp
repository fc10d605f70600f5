#pragma once
// Embodied robot model: unicycle kinematics, LED ring, and the three
// sensor channels (omnidirectional LED camera with obstacle occlusion,
// proximity, positioning). Sensing operates on a frozen world snapshot;
// only the engine applies motion.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "swarmpath/arena.hpp"
#include "swarmpath/geometry.hpp"

namespace swarmpath {

/// Actuator limit: maximum heading change per tick.
inline constexpr double kMaxTurnPerTick = kPi / 2.0;

enum class LedColor {
    Off,      // resting
    Green,    // exploring
    Yellow,   // returning to nest
    Red,      // static subgoal
    White,    // goal founder / forming subgoal approach
    Purple,   // alignment in progress
    Blue,     // sub-nest (first alignment done)
    Cyan,     // second alignment done
    Magenta,  // recovery / hidden-location identifier
    Orange,   // decision making
};

inline const char* to_string(LedColor c) {
    switch (c) {
        case LedColor::Off: return "off";
        case LedColor::Green: return "green";
        case LedColor::Yellow: return "yellow";
        case LedColor::Red: return "red";
        case LedColor::White: return "white";
        case LedColor::Purple: return "purple";
        case LedColor::Blue: return "blue";
        case LedColor::Cyan: return "cyan";
        case LedColor::Magenta: return "magenta";
        case LedColor::Orange: return "orange";
    }
    return "?";
}

struct Pose {
    Point2 position;
    Angle heading;
};

struct VelocityCmd {
    double linear = 0.0;   // units/tick, in [0, robot_speed]
    double angular = 0.0;  // radians/tick, in [-kMaxTurnPerTick, kMaxTurnPerTick]
};

struct LedSighting {
    LedColor color = LedColor::Off;
    double range = 0.0;
    Angle bearing;  // relative to own heading
    int emitter_id = -1;
};

struct ProximityReading {
    Angle bearing;
    double range = 0.0;
};

struct TargetSighting {
    bool visible = false;
    double range = 0.0;
    Angle bearing;
};

/// Everything one robot senses in one tick.
struct Percept {
    Pose self_pose;
    std::vector<LedSighting> visible_leds;   // id-ascending
    std::vector<ProximityReading> proximity;
    TargetSighting nest;
    TargetSighting goal;
    bool path_complete = false;  // ambient completion cue, latched by the engine

    const LedSighting* find_led(int emitter_id) const {
        for (const auto& s : visible_leds)
            if (s.emitter_id == emitter_id) return &s;
        return nullptr;
    }
};

/// Minimal per-robot view the sensors need.
struct RobotSnapshot {
    int id = -1;
    Pose pose;
    LedColor led = LedColor::Off;
};

namespace detail {

inline TargetSighting sight_target(const Pose& self, Point2 target, double max_range,
                                   const std::vector<Obstacle>& obstacles) {
    TargetSighting t;
    const double d = distance(self.position, target);
    if (d > max_range) return t;
    if (!line_of_sight(self.position, target, obstacles)) return t;
    t.visible = true;
    t.range = d;
    t.bearing = signed_angle_diff(direction(self.position, target), self.heading);
    return t;
}

}  // namespace detail

/// Build the percept for `self` against a frozen snapshot of all robots.
/// The LED camera sees every lit emitter within max_visible_range with a
/// clear line of sight (robot bodies do not occlude). Proximity reports
/// robots, obstacles, and arena walls within proximity_range.
inline Percept build_percept(const RobotSnapshot& self, std::span<const RobotSnapshot> robots,
                             const ArenaConfig& arena, const SimParams& params,
                             bool path_complete = false) {
    Percept p;
    p.self_pose = self.pose;
    p.path_complete = path_complete;
    const Point2 pos = self.pose.position;

    const double vis2 = params.max_visible_range * params.max_visible_range;
    const double prox = params.proximity_range;
    for (const RobotSnapshot& other : robots) {
        if (other.id == self.id) continue;
        const Point2 delta = other.pose.position - pos;
        const double d2 = delta.x * delta.x + delta.y * delta.y;
        if (d2 > vis2) continue;
        const double d = std::sqrt(d2);
        if (other.led != LedColor::Off &&
            line_of_sight(pos, other.pose.position, arena.obstacles)) {
            p.visible_leds.push_back(
                {other.led, d,
                 signed_angle_diff(direction(pos, other.pose.position), self.pose.heading),
                 other.id});
        }
        if (d <= prox) {
            p.proximity.push_back(
                {signed_angle_diff(direction(pos, other.pose.position), self.pose.heading), d});
        }
    }

    for (const Obstacle& ob : arena.obstacles) {
        const Point2 cp = ob.closest_point(pos);
        const double d = distance(pos, cp);
        if (d > 0.0 && d <= prox)
            p.proximity.push_back({signed_angle_diff(direction(pos, cp), self.pose.heading), d});
    }

    // Arena walls enter the proximity channel so controllers steer off them.
    const Rect& b = arena.bounds;
    const struct { double d; double world_angle; } walls[4] = {
        {pos.x - b.min_corner.x, kPi},
        {b.max_corner.x - pos.x, 0.0},
        {pos.y - b.min_corner.y, -kPi / 2.0},
        {b.max_corner.y - pos.y, kPi / 2.0},
    };
    for (const auto& w : walls) {
        if (w.d <= prox)
            p.proximity.push_back(
                {signed_angle_diff(Angle(w.world_angle), self.pose.heading), std::max(w.d, 0.0)});
    }

    p.nest = detail::sight_target(self.pose, arena.nest, params.max_visible_range, arena.obstacles);
    p.goal = detail::sight_target(self.pose, arena.goal, params.max_visible_range, arena.obstacles);
    return p;
}

/// One tick of unicycle motion, rotate-then-translate:
/// heading' = heading + angular, position' = position + linear * u(heading').
inline Pose integrate_motion(const Pose& pose, const VelocityCmd& cmd) {
    Pose out;
    out.heading = Angle(pose.heading.radians() + cmd.angular);
    out.position = {pose.position.x + cmd.linear * std::cos(out.heading.radians()),
                    pose.position.y + cmd.linear * std::sin(out.heading.radians())};
    return out;
}

/// Stop-on-contact collision response: keep the proposed pose if the robot
/// disc stays inside the walls, clear of all obstacles and of every other
/// robot disc; otherwise keep the old position with the proposed heading.
inline Pose resolve_collision(const Pose& old_pose, const Pose& proposed,
                              const ArenaConfig& arena, const SimParams& params,
                              std::span<const Point2> other_centers) {
    const Point2 pos = proposed.position;
    const double r = params.robot_radius;

    bool free = pos.x >= arena.bounds.min_corner.x + r &&
                pos.x <= arena.bounds.max_corner.x - r &&
                pos.y >= arena.bounds.min_corner.y + r &&
                pos.y <= arena.bounds.max_corner.y - r;
    for (const Obstacle& ob : arena.obstacles) {
        if (!free) break;
        free = ob.distance_to(pos) >= r;
    }
    const double min_sep2 = (2.0 * r) * (2.0 * r);
    for (const Point2& c : other_centers) {
        if (!free) break;
        const Point2 d = c - pos;
        free = d.x * d.x + d.y * d.y >= min_sep2;
    }

    if (free) return proposed;
    return {old_pose.position, proposed.heading};
}

}  // namespace swarmpath
