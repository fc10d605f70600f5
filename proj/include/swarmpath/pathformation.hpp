#pragma once
// Per-robot path-formation controller: exploring, return-to-nest,
// subgoal formation, recovery behavior, and the two cascaded alignment
// optimizations. A pure function of (memory, percept, inbox, params,
// rng substream); the engine owns all world mutation.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "swarmpath/controller_types.hpp"
#include "swarmpath/steering.hpp"

namespace swarmpath {

/// Bearing/range geometry of an aligning robot's two chain neighbors.
struct AlignmentGeometry {
    Angle theta1;     // bearing to the goal-side neighbor
    Angle theta2;     // bearing to the nest-side neighbor
    double x = 0.0;   // range to the goal-side neighbor
    double y = 0.0;   // range to the nest-side neighbor
    Point2 goal_side; // world positions, derived from the percept
    Point2 nest_side;
};

/// Deviation from collinearity at the robot: |pi - |theta1 - theta2||.
/// Zero iff the robot lies on the segment between its two neighbors.
inline Angle alignment_error(const AlignmentGeometry& geom) {
    const double spread = std::abs(signed_angle_diff(geom.theta1, geom.theta2).radians());
    return Angle(std::abs(kPi - spread));
}

/// Project the two alignment neighbors out of the percept. Empty when
/// either neighbor is invisible this tick (caller transitions to the
/// recovery state).
inline std::optional<AlignmentGeometry> alignment_geometry(const Percept& percept,
                                                           const RobotMemory& memory) {
    if (!memory.goalside_ref || !memory.nestside_ref) return std::nullopt;
    const auto goal_side = find_beacon(percept, *memory.goalside_ref);
    const auto nest_side = find_beacon(percept, *memory.nestside_ref);
    if (!goal_side || !nest_side) return std::nullopt;
    AlignmentGeometry g;
    g.theta1 = goal_side->bearing;
    g.theta2 = nest_side->bearing;
    g.x = goal_side->range;
    g.y = nest_side->range;
    g.goal_side = goal_side->world_pos;
    g.nest_side = nest_side->world_pos;
    return g;
}

/// One alignment tick: move toward the perpendicular foot of the robot's
/// position on the neighbor-neighbor chord, capped at robot_speed.
/// done=true once the error angle is within tolerance.
inline std::pair<VelocityCmd, bool> optimization_step(const AlignmentGeometry& geom,
                                                      const Pose& pose,
                                                      const SimParams& params) {
    if (alignment_error(geom).radians() <= params.opt_error_tolerance)
        return {VelocityCmd{}, true};

    const Point2 chord = geom.nest_side - geom.goal_side;
    const double len2 = dot(chord, chord);
    if (len2 <= 1e-12) return {VelocityCmd{}, true};  // coincident neighbors
    double t = dot(pose.position - geom.goal_side, chord) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Point2 foot = geom.goal_side + t * chord;
    const double dist = distance(pose.position, foot);
    if (dist <= 1e-9) return {VelocityCmd{}, true};

    const double desired = direction(pose.position, foot).radians();
    VelocityCmd cmd = turn_and_go(pose, desired, std::min(params.robot_speed, dist));
    return {cmd, false};
}

/// Repulsion override: when a recovery robot's magenta LED is within
/// repulsion_range, steer directly away from it at full speed. Picks the
/// nearest magenta, ties broken by lower emitter id.
inline std::optional<VelocityCmd> recovery_repulsion(const Percept& percept,
                                                     const SimParams& params) {
    const LedSighting* nearest = nullptr;
    for (const auto& s : percept.visible_leds) {
        if (s.color != LedColor::Magenta || s.range > params.repulsion_range) continue;
        if (!nearest || s.range < nearest->range ||
            (s.range == nearest->range && s.emitter_id < nearest->emitter_id)) {
            nearest = &s;
        }
    }
    if (!nearest) return std::nullopt;
    const double away =
        percept.self_pose.heading.radians() + nearest->bearing.radians() + kPi;
    return turn_and_go(percept.self_pose, wrap_pi(away), params.robot_speed);
}

namespace detail {

inline bool is_beacon_color(LedColor c) {
    return c == LedColor::Red || c == LedColor::Blue || c == LedColor::Cyan;
}

/// Goal or a static chain member (red/blue/cyan LED) within detect range.
/// Nearest wins; the goal beats a robot on an exact tie, then lower id.
inline std::optional<TrackedBeacon> detect_beacon(const Percept& percept,
                                                  const SimParams& params) {
    std::optional<TrackedBeacon> best;
    if (percept.goal.visible && percept.goal.range <= params.detect_range)
        best = TrackedBeacon{BeaconRef::goal_point(), percept.goal.range, percept.goal.bearing};
    for (const auto& s : percept.visible_leds) {
        if (!is_beacon_color(s.color)) continue;
        if (s.range > params.detect_range) continue;
        if (!best || s.range < best->last_range) {
            best = TrackedBeacon{BeaconRef::robot(s.emitter_id), s.range, s.bearing};
        }
    }
    return best;
}

inline Point2 sighting_world_pos(const Percept& percept, double range, Angle bearing) {
    const double a = percept.self_pose.heading.radians() + bearing.radians();
    return percept.self_pose.position + range * Point2{std::cos(a), std::sin(a)};
}

/// While approaching, prefer a detectable beacon that sits meaningfully
/// closer to the nest than the current one: chains then extend link by
/// link instead of stacking several robots on the same beacon shell.
inline void retarget_toward_nest(RobotMemory& m, const Percept& percept,
                                 const SimParams& params, Point2 current_beacon_pos) {
    constexpr double kRetargetGain = 5.0;  // hysteresis, world units
    double best_nest_dist = distance(current_beacon_pos, m.nest_position) - kRetargetGain;
    std::optional<TrackedBeacon> better;
    if (percept.goal.visible && percept.goal.range <= params.detect_range) {
        const Point2 p = sighting_world_pos(percept, percept.goal.range, percept.goal.bearing);
        const double nd = distance(p, m.nest_position);
        if (nd < best_nest_dist) {
            best_nest_dist = nd;
            better = TrackedBeacon{BeaconRef::goal_point(), percept.goal.range,
                                   percept.goal.bearing};
        }
    }
    for (const auto& s : percept.visible_leds) {
        if (!is_beacon_color(s.color) || s.range > params.detect_range) continue;
        const Point2 p = sighting_world_pos(percept, s.range, s.bearing);
        const double nd = distance(p, m.nest_position);
        if (nd < best_nest_dist) {
            best_nest_dist = nd;
            better = TrackedBeacon{BeaconRef::robot(s.emitter_id), s.range, s.bearing};
        }
    }
    if (better) m.tracked_beacon = better;
}

inline bool at_nest(const Percept& percept, const RobotMemory& m) {
    return distance(percept.self_pose.position, m.nest_position) <= m.nest_arrival_radius;
}

inline void enter_resting(RobotMemory& m, const SimParams& params) {
    m.state = PfState::Resting;
    m.rest_ticks_left = std::max<long>(params.rest_duration, 1);
    m.tracked_beacon.reset();
}

/// Cascade serialization: hold back while another aligner is visibly
/// active, or while a not-yet-aligned red subgoal sits closer to the nest
/// (for the first alignment) or farther from it (for the second). A
/// waiting timeout breaks the rare visibility deadlocks.
inline constexpr long kCascadeWaitLimit = 300;

inline bool cascade_turn_blocked(const RobotMemory& m, const Percept& percept,
                                 bool nestward_sweep) {
    const double my_nest_dist = distance(percept.self_pose.position, m.nest_position);
    for (const auto& s : percept.visible_leds) {
        if (s.color == LedColor::Purple) return true;  // someone is adjusting now
        if (nestward_sweep && s.color == LedColor::Red) {
            const Point2 p = sighting_world_pos(percept, s.range, s.bearing);
            if (distance(p, m.nest_position) < my_nest_dist - 1e-9) return true;
        }
    }
    return false;
}

}  // namespace detail

/// Start of the first alignment cascade (transition g): a frozen subgoal
/// activates once the path is complete, its formation parent is visible,
/// and the nest or a blue sub-nest can serve as its nest-side anchor.
/// The nearest such anchor is chosen; the nest wins ties, then lower id.
inline std::optional<BeaconRef> cascade_handoff(const RobotMemory& memory,
                                                const Percept& percept) {
    if (memory.state != PfState::Subgoal || !memory.subgoal_static) return std::nullopt;
    if (!percept.path_complete) return std::nullopt;
    if (!memory.goalside_ref || !find_beacon(percept, *memory.goalside_ref))
        return std::nullopt;

    std::optional<BeaconRef> anchor;
    double anchor_range = 0.0;
    if (percept.nest.visible) {
        anchor = BeaconRef::nest_point();
        anchor_range = percept.nest.range;
    }
    for (const auto& s : percept.visible_leds) {
        if (s.color != LedColor::Blue) continue;
        if (!anchor || s.range < anchor_range) {
            anchor = BeaconRef::robot(s.emitter_id);
            anchor_range = s.range;
        }
    }
    return anchor;
}

template <typename Rng>
ControllerOutput pf_step(const RobotMemory& memory, const Percept& percept,
                         std::span<const Message> inbox, const SimParams& params, Rng& rng) {
    (void)inbox;  // the path-formation layer is LED-driven
    ControllerOutput out;
    RobotMemory& m = out.memory;
    m = memory;
    const Pose& pose = percept.self_pose;

    switch (m.state) {
        case PfState::Resting: {
            // Resting robots clear the field: home to the deployment point,
            // then hold there.
            out.cmd = homing_with_avoidance(pose, m.deployment_point, percept, params,
                                            rng.uniform(-kSeekJitter, kSeekJitter));
            if (percept.path_complete) break;  // rest out the trial
            if (m.rest_ticks_left > 0) --m.rest_ticks_left;
            if (m.rest_ticks_left == 0) {  // transition i
                m.state = PfState::Exploring;
                m.explore_ticks = 0;
            }
            break;
        }

        case PfState::Exploring: {
            if (percept.path_complete) {  // transition a
                detail::enter_resting(m, params);
                break;
            }
            if (m.explore_ticks == 0) m.sortie_offset = rng.uniform(-kSortieSpread, kSortieSpread);
            ++m.explore_ticks;
            wall_bounce(m, percept, params, rng);
            if (auto beacon = detail::detect_beacon(percept, params)) {  // transition c/e
                m.state = PfState::Subgoal;
                m.subgoal_static = false;
                m.tracked_beacon = beacon;
                out.notes.push_back({"beacon_acquired",
                                     beacon->ref.kind == BeaconRef::Kind::GoalPoint
                                         ? -1
                                         : beacon->ref.robot_id});
                break;
            }
            if (m.explore_ticks > m.max_explore_ticks) {  // transition b
                m.state = PfState::ReturnToNest;
                m.max_explore_ticks += params.explore_time_increment;
                break;
            }
            if (auto repulse = recovery_repulsion(percept, params)) {
                out.cmd = *repulse;
            } else if (m.goal_hint) {
                // The goal founder possesses the goal location; it steers
                // back to it instead of searching at random.
                out.cmd = seek_point(pose, *m.goal_hint, percept, params, params.robot_speed);
            } else {
                out.cmd = explore_policy(m, percept, params, rng);
            }
            break;
        }

        case PfState::ReturnToNest: {
            if (percept.path_complete) {  // transition a
                detail::enter_resting(m, params);
                break;
            }
            if (detail::at_nest(percept, m)) {  // transition d
                m.state = PfState::Exploring;
                m.explore_ticks = 0;
                break;
            }
            if (auto repulse = recovery_repulsion(percept, params)) {
                out.cmd = *repulse;
            } else {
                out.cmd = seek_point(pose, m.nest_position, percept, params, params.robot_speed,
                                     rng.uniform(-kSeekJitter, kSeekJitter));
            }
            break;
        }

        case PfState::Subgoal: {
            if (!m.subgoal_static) {
                if (percept.path_complete) {  // transition a, approach abandoned
                    detail::enter_resting(m, params);
                    break;
                }
                auto sighting = find_beacon(percept, m.tracked_beacon->ref);
                if (!sighting) {  // transition f
                    m.state = PfState::RecoveryBehavior;
                    m.tracked_beacon.reset();
                    out.notes.push_back({"recovery_triggered", 0});
                    break;
                }
                detail::retarget_toward_nest(m, percept, params, sighting->world_pos);
                sighting = find_beacon(percept, m.tracked_beacon->ref);
                m.tracked_beacon->last_range = sighting->range;
                m.tracked_beacon->last_bearing = sighting->bearing;
                if (sighting->range >= params.subgoal_spacing) {
                    // Static from here on; the tracked beacon becomes the
                    // goal-side neighbor for the later alignments.
                    m.subgoal_static = true;
                    m.goalside_ref = m.tracked_beacon->ref;
                    m.tracked_beacon.reset();
                    out.notes.push_back({"froze_subgoal", 0});
                    break;
                }
                if (auto repulse = recovery_repulsion(percept, params)) {
                    out.cmd = *repulse;
                } else {
                    out.cmd = seek_point(pose, m.nest_position, percept, params,
                                         params.robot_speed,
                                         rng.uniform(-kSeekJitter, kSeekJitter));
                }
            } else {
                if (auto anchor = cascade_handoff(m, percept)) {  // transition g
                    if (!detail::cascade_turn_blocked(m, percept, true) ||
                        m.cascade_wait_ticks > detail::kCascadeWaitLimit) {
                        m.state = PfState::Optimization1;
                        m.cascade_wait_ticks = 0;
                        m.stalled_ticks = 0;
                        m.nestside_ref = anchor;
                        const auto parent = find_beacon(percept, *m.goalside_ref);
                        m.tracked_beacon =
                            TrackedBeacon{*m.goalside_ref, parent->range, parent->bearing};
                        out.notes.push_back({"opt1_start", 0});
                    } else {
                        ++m.cascade_wait_ticks;
                    }
                }
            }
            break;
        }

        case PfState::RecoveryBehavior: {
            if (percept.path_complete) {  // transition a
                detail::enter_resting(m, params);
            }
            // Otherwise hold position and keep marking the blind spot.
            break;
        }

        case PfState::Optimization1:
        case PfState::Optimization2: {
            const bool in_opt1 = m.state == PfState::Optimization1;
            const bool done_flag =
                in_opt1 ? m.role_flags.opt1_done : m.role_flags.opt2_done;
            if (!done_flag) {
                const auto geom = alignment_geometry(percept, m);
                if (!geom) {  // neighbor lost mid-alignment (transition f)
                    m.state = PfState::RecoveryBehavior;
                    m.tracked_beacon.reset();
                    out.notes.push_back({"recovery_triggered", 1});
                    break;
                }
                m.tracked_beacon->last_range = geom->x;
                m.tracked_beacon->last_bearing = geom->theta1;
                auto [cmd, done] = optimization_step(*geom, pose, params);
                // Physical blocking: accept the best reachable alignment
                // after a sustained stall against neighboring bodies.
                if (!done && cmd.linear > 0.0 &&
                    distance(pose.position, m.prev_position) < 1e-9) {
                    if (++m.stalled_ticks > 60) {
                        done = true;
                        cmd = VelocityCmd{};
                        out.notes.push_back({"alignment_blocked", 0});
                    }
                } else {
                    m.stalled_ticks = 0;
                }
                if (!done && cmd.linear > 0.0 &&
                    detail::nearest_proximity(percept, params.proximity_range)) {
                    // Thread through traffic toward the chord foot.
                    const Point2 chord = geom->nest_side - geom->goal_side;
                    const double len2 = dot(chord, chord);
                    double t = len2 > 1e-12
                                   ? std::clamp(dot(pose.position - geom->goal_side, chord) / len2,
                                                0.0, 1.0)
                                   : 0.0;
                    const Point2 foot = geom->goal_side + t * chord;
                    out.cmd = seek_point(pose, foot, percept, params,
                                         std::min(params.robot_speed,
                                                  distance(pose.position, foot)));
                } else {
                    out.cmd = cmd;
                }
                if (done) {
                    if (in_opt1) {
                        m.role_flags.opt1_done = true;
                        m.role_flags.is_subnest = true;
                        out.notes.push_back({"opt1_done", 0});
                    } else {
                        m.role_flags.opt2_done = true;
                        out.notes.push_back({"opt2_done", 0});
                    }
                }
            } else if (in_opt1) {
                // Transition h: the second alignment starts at the chain's
                // goal end and sweeps nest-ward as goal-side neighbors
                // turn cyan.
                bool start_opt2 = false;
                if (m.goalside_ref->kind == BeaconRef::Kind::GoalPoint) {
                    start_opt2 = percept.goal.visible;
                } else if (const auto* led = percept.find_led(m.goalside_ref->robot_id)) {
                    start_opt2 = led->color == LedColor::Cyan;
                }
                if (start_opt2) {
                    if (!detail::cascade_turn_blocked(m, percept, false) ||
                        m.cascade_wait_ticks > detail::kCascadeWaitLimit) {
                        m.state = PfState::Optimization2;
                        m.cascade_wait_ticks = 0;
                        m.stalled_ticks = 0;
                        out.notes.push_back({"opt2_start", 0});
                    } else {
                        ++m.cascade_wait_ticks;
                    }
                }
            }
            break;
        }

        case PfState::DecisionMaking:
            // Allocation decisions live in the task-allocation controller;
            // this state is unreachable in the path-formation layer.
            if (percept.path_complete) detail::enter_resting(m, params);
            break;
    }

    m.prev_position = pose.position;
    out.led = led_for(m);
    return out;
}

}  // namespace swarmpath
