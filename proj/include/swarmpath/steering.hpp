#pragma once
// Low-level motion policies shared by the controllers: bounded-turn
// pursuit of a world point, potential-field blends, and beacon lookup
// in a percept.

#include <algorithm>
#include <cmath>
#include <optional>

#include "swarmpath/arena.hpp"
#include "swarmpath/controller_types.hpp"
#include "swarmpath/geometry.hpp"
#include "swarmpath/robot.hpp"

namespace swarmpath {

inline constexpr double kExploreJitter = 0.35;    // radians, uniform +-
inline constexpr double kSeekJitter = 0.25;       // radians, uniform +-, traffic only
inline constexpr double kSortieSpread = 1.3;      // per-sortie field rotation, uniform +-
inline constexpr long kWallBounceTicks = 40;      // sustained contact before re-aiming
inline constexpr double kAttractionWeight = 1.0;  // toward/away from reference point
inline constexpr double kAvoidWeight = 2.5;       // proximity avoidance dominates
inline constexpr double kAvoidSkew = 0.35;        // outward bias on the avoidance tangent

namespace detail {

inline Point2 unit_from(double world_angle) {
    return {std::cos(world_angle), std::sin(world_angle)};
}

/// Nearest proximity reading inside the avoidance radius.
inline const ProximityReading* nearest_proximity(const Percept& percept, double within) {
    const ProximityReading* best = nullptr;
    for (const auto& r : percept.proximity) {
        if (r.range < within && (!best || r.range < best->range)) best = &r;
    }
    return best;
}

/// Avoidance direction (world frame) for an obstacle seen at `bearing`:
/// tangential with a fixed rotational side plus a small outward bias.
/// Tangent-following rounds long walls instead of oscillating against
/// them, and the fixed side keeps two approaching robots on opposite
/// world sides of each other.
inline double avoidance_direction(const Pose& pose, Angle bearing) {
    return pose.heading.radians() + bearing.radians() + kPi / 2.0 + kAvoidSkew;
}

}  // namespace detail

/// Turn toward a desired world heading (bounded by the actuator limit)
/// and advance at `linear` when the residual error after this tick's
/// rotation is zero; otherwise rotate in place.
inline VelocityCmd turn_and_go(const Pose& pose, double desired_world_angle, double linear) {
    VelocityCmd cmd;
    const double err = wrap_pi(desired_world_angle - pose.heading.radians());
    cmd.angular = std::clamp(err, -kMaxTurnPerTick, kMaxTurnPerTick);
    cmd.linear = std::abs(err) <= kMaxTurnPerTick ? linear : 0.0;
    return cmd;
}

/// Pursue a world point at full speed, blending in proximity avoidance.
/// A small caller-supplied heading jitter keeps crowded contact
/// situations from freezing into fixed points.
inline VelocityCmd seek_point(const Pose& pose, Point2 target, const Percept& percept,
                              const SimParams& params, double speed_cap,
                              double heading_jitter = 0.0) {
    const Point2 to_target = target - pose.position;
    Point2 v{0.0, 0.0};
    const double d = norm(to_target);
    if (d > 1e-12) v = v + (kAttractionWeight / d) * to_target;

    if (const auto* near = detail::nearest_proximity(percept, params.proximity_range)) {
        v = v + kAvoidWeight * detail::unit_from(detail::avoidance_direction(pose, near->bearing));
    }
    const double desired =
        ((norm(v) > 1e-12) ? std::atan2(v.y, v.x) : pose.heading.radians()) + heading_jitter;
    return turn_and_go(pose, desired, std::min(speed_cap, params.robot_speed));
}

/// Random exploration driven away from the nest: unit repulsion from the
/// nest (rotated by the sortie's field offset, which makes fan-out
/// directions spiral and cover obstacle shadows across sorties), plus
/// obstacle avoidance, plus uniform heading jitter from the robot's own
/// stream. Linear speed is always robot_speed.
template <typename Rng>
VelocityCmd explore_policy(const RobotMemory& memory, const Percept& percept,
                           const SimParams& params, Rng& rng) {
    const Pose& pose = percept.self_pose;
    const Point2 away = pose.position - memory.nest_position;
    Point2 v{0.0, 0.0};
    const double d = norm(away);
    if (d > 1e-12) {
        const double field_angle = std::atan2(away.y, away.x) + memory.sortie_offset;
        v = v + kAttractionWeight * detail::unit_from(field_angle);
    } else {
        v = detail::unit_from(pose.heading.radians());
    }

    if (const auto* near = detail::nearest_proximity(percept, params.proximity_range)) {
        v = v + kAvoidWeight * detail::unit_from(detail::avoidance_direction(pose, near->bearing));
    }
    double desired = (norm(v) > 1e-12) ? std::atan2(v.y, v.x) : pose.heading.radians();
    desired += rng.uniform(-kExploreJitter, kExploreJitter);

    VelocityCmd cmd = turn_and_go(pose, desired, params.robot_speed);
    cmd.linear = params.robot_speed;
    return cmd;
}

/// Potential-field homing toward the deployment point. Distance comes
/// from the euclidean formula, the approach angle from asin(|dy| / d)
/// with the quadrant recovered from the coordinate-difference signs.
/// Zero command once within half a body radius.
inline VelocityCmd homing_field(const Pose& current, Point2 deployment,
                                const SimParams& params) {
    const double dx = deployment.x - current.position.x;
    const double dy = deployment.y - current.position.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= params.robot_radius / 2.0) return VelocityCmd{};

    double ratio = std::abs(dy) / d;
    if (ratio > 1.0) ratio = 1.0;
    const double alpha = std::asin(ratio);
    double world_angle;
    if (dx >= 0.0) {
        world_angle = dy >= 0.0 ? alpha : -alpha;
    } else {
        world_angle = dy >= 0.0 ? kPi - alpha : alpha - kPi;
    }
    return turn_and_go(current, world_angle, std::min(params.robot_speed, d));
}

/// Homing with traffic tolerance: the pure potential field when the way
/// is clear, a jittered avoidance blend when something sits inside the
/// proximity ring.
inline VelocityCmd homing_with_avoidance(const Pose& current, Point2 deployment,
                                         const Percept& percept, const SimParams& params,
                                         double heading_jitter = 0.0) {
    const double d = distance(current.position, deployment);
    if (d <= params.robot_radius / 2.0) return VelocityCmd{};
    if (detail::nearest_proximity(percept, params.proximity_range)) {
        return seek_point(current, deployment, percept, params, std::min(params.robot_speed, d),
                          heading_jitter);
    }
    return homing_field(current, deployment, params);
}

/// Bounce off sustained wall contact with a fresh exploration-field
/// rotation; without it exploration degenerates into perimeter
/// circulation and obstacle shadows are never swept.
template <typename Rng>
void wall_bounce(RobotMemory& memory, const Percept& percept, const SimParams& params,
                 Rng& rng) {
    if (detail::nearest_proximity(percept, params.proximity_range)) {
        if (++memory.wall_contact_ticks > kWallBounceTicks) {
            memory.sortie_offset = rng.uniform(-kPi, kPi);
            memory.wall_contact_ticks = 0;
        }
    } else {
        memory.wall_contact_ticks = 0;
    }
}

/// A beacon located in the current percept.
struct BeaconSighting {
    double range = 0.0;
    Angle bearing;
    Point2 world_pos;
};

/// Resolve a beacon reference against the percept; empty when the beacon
/// is out of range or occluded this tick.
inline std::optional<BeaconSighting> find_beacon(const Percept& percept, const BeaconRef& ref) {
    double range = 0.0;
    Angle bearing;
    switch (ref.kind) {
        case BeaconRef::Kind::GoalPoint:
            if (!percept.goal.visible) return std::nullopt;
            range = percept.goal.range;
            bearing = percept.goal.bearing;
            break;
        case BeaconRef::Kind::NestPoint:
            if (!percept.nest.visible) return std::nullopt;
            range = percept.nest.range;
            bearing = percept.nest.bearing;
            break;
        case BeaconRef::Kind::Robot: {
            const LedSighting* led = percept.find_led(ref.robot_id);
            if (!led) return std::nullopt;
            range = led->range;
            bearing = led->bearing;
            break;
        }
    }
    const double world_angle = percept.self_pose.heading.radians() + bearing.radians();
    const Point2 pos = percept.self_pose.position + range * detail::unit_from(world_angle);
    return BeaconSighting{range, bearing, pos};
}

}  // namespace swarmpath
