#pragma once
// Task-allocation controller: goal discovery, path-length estimation,
// the recruit protocol between the goal founder and volunteers, and
// deployment-point homing for resting robots.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "swarmpath/controller_types.hpp"
#include "swarmpath/pathformation.hpp"
#include "swarmpath/steering.hpp"

namespace swarmpath {

/// l = s * t: path length estimated from the founder's exploration time.
inline double estimate_path_length(long explore_ticks, double speed) {
    return speed * static_cast<double>(explore_ticks);
}

/// n0 = l / v: robots needed to span the path with the visual range,
/// before rounding.
inline double required_robots(double path_length, double visual_range) {
    return path_length / visual_range;
}

/// n = ceil(l / v) + delta: the allocated count, with the environment
/// complexity slack added after rounding up.
inline int allocated_robots(double path_length, double visual_range, int delta) {
    return static_cast<int>(std::ceil(required_robots(path_length, visual_range))) + delta;
}

namespace detail {

inline constexpr long kCloseLinger = 3;        // founder keeps answering late volunteers
inline constexpr long kDecisionPatience = 8;   // ticks to wait for a live recruit request

/// Ticks a founder waits for further volunteers before deciding none are
/// coming: one full sortie plus travel slack.
inline long recruit_patience(const SimParams& params) {
    return params.min_explore_time + 400;
}

}  // namespace detail

/// Founder side of the recruit protocol for one tick. While the ledger is
/// open: announce, ack volunteers in ascending id until the needed count
/// is reached, then broadcast the rest order and close. After closing,
/// linger a few ticks answering in-flight volunteers with rest orders.
inline void recruit_founder(RobotMemory& m, std::span<const Message> inbox,
                            const SimParams& params, std::vector<Message>& outgoing,
                            std::vector<ControllerNote>& notes, int self_id) {
    RecruitLedger& ledger = *m.ledger;
    if (!ledger.closed) {
        outgoing.push_back(broadcast(self_id, GoalFoundInfo{m.found_explore_time}));
        outgoing.push_back(broadcast(self_id, RecruitRequest{ledger.needed}));

        std::vector<int> volunteers;
        for (const Message& msg : inbox) {
            if (const auto* v = std::get_if<Volunteer>(&msg.payload)) volunteers.push_back(v->id);
        }
        std::sort(volunteers.begin(), volunteers.end());
        for (int id : volunteers) {
            ledger.last_volunteer_tick = m.tick;
            if (static_cast<int>(ledger.acked_ids.size()) < ledger.needed &&
                !ledger.acked_ids.count(id)) {
                ledger.acked_ids.insert(id);
                outgoing.push_back(unicast(self_id, id, Ack{id}));
                notes.push_back({"ack_sent", id});
            }
        }
        const bool filled = static_cast<int>(ledger.acked_ids.size()) >= ledger.needed;
        const long quiet_since = std::max(ledger.opened_tick, ledger.last_volunteer_tick);
        if (filled || m.tick - quiet_since > detail::recruit_patience(params)) {
            outgoing.push_back(broadcast(self_id, RestOrder{}));
            ledger.closed = true;
            ledger.close_tick = m.tick;
            notes.push_back({"ledger_closed", static_cast<long>(ledger.acked_ids.size())});
        }
    } else {
        for (const Message& msg : inbox) {
            if (const auto* v = std::get_if<Volunteer>(&msg.payload)) {
                outgoing.push_back(unicast(self_id, v->id, RestOrder{}));
            }
        }
    }
}

/// Worker side: volunteer once in response to a live recruit request,
/// then wait for exactly one of ack / rest order.
inline void recruit_worker(RobotMemory& m, std::span<const Message> inbox,
                           std::vector<Message>& outgoing,
                           std::vector<ControllerNote>& notes, int self_id) {
    const Message* request = nullptr;
    bool acked = false;
    bool rested = false;
    for (const Message& msg : inbox) {
        if (const auto* a = std::get_if<Ack>(&msg.payload)) {
            if (a->id == self_id) acked = true;
        } else if (std::holds_alternative<RestOrder>(msg.payload)) {
            rested = true;
        } else if (std::holds_alternative<RecruitRequest>(msg.payload)) {
            if (!request || msg.sender < request->sender) request = &msg;
        }
    }

    if (m.volunteered && acked) {  // transition e
        m.ta_state = TaState::InitiateTask;
        m.initiated = true;
        notes.push_back({"ack_consumed", 0});
        return;
    }
    if (m.volunteered && rested) {  // transition d
        m.ta_state = TaState::Resting;
        m.rest_ticks_left = std::max<long>(1, m.rest_ticks_left);
        notes.push_back({"rest_consumed", 0});
        return;
    }
    if (!m.volunteered) {
        if (request) {
            m.volunteered = true;
            m.founder_id = request->sender;
            m.decision_idle_ticks = 0;
            outgoing.push_back(unicast(self_id, request->sender, Volunteer{self_id}));
            notes.push_back({"volunteered", request->sender});
        } else if (++m.decision_idle_ticks > detail::kDecisionPatience) {
            // No live recruitment: the task is already staffed. Rest.
            m.ta_state = TaState::Resting;
            m.rest_ticks_left = std::max<long>(1, m.rest_ticks_left);
            notes.push_back({"rested_no_recruitment", 0});
        }
    }
}

template <typename Rng>
ControllerOutput ta_step(const RobotMemory& memory, const Percept& percept,
                         std::span<const Message> inbox, const SimParams& params, Rng& rng,
                         int self_id) {
    ControllerOutput out;
    RobotMemory& m = out.memory;
    m = memory;
    const Pose& pose = percept.self_pose;

    // Light-signal announcements are remembered wherever they are heard;
    // the decision itself happens only at the nest.
    for (const Message& msg : inbox) {
        if (std::holds_alternative<GoalFoundInfo>(msg.payload) ||
            std::holds_alternative<RecruitRequest>(msg.payload)) {
            m.heard_goal_found = true;
            if (m.founder_id < 0) m.founder_id = msg.sender;
        }
    }

    switch (m.ta_state) {
        case TaState::Exploring: {
            if (m.explore_ticks == 0) m.sortie_offset = rng.uniform(-kSortieSpread, kSortieSpread);
            ++m.explore_ticks;
            wall_bounce(m, percept, params, rng);
            if (percept.goal.visible && percept.goal.range <= params.detect_range) {
                // Transition c: founder candidate carries its exploration time
                // home, and remembers where it saw the goal.
                m.goal_found = true;
                m.found_explore_time = m.explore_ticks;
                const double world_angle =
                    pose.heading.radians() + percept.goal.bearing.radians();
                m.goal_hint = pose.position + percept.goal.range *
                                                  Point2{std::cos(world_angle),
                                                         std::sin(world_angle)};
                m.ta_state = TaState::ReturnToNest;
                out.notes.push_back({"goal_found", m.found_explore_time});
                break;
            }
            if (percept.path_complete || m.heard_goal_found) {  // transition b (informed)
                m.ta_state = TaState::ReturnToNest;
                break;
            }
            if (m.explore_ticks > m.max_explore_ticks) {  // transition b
                m.ta_state = TaState::ReturnToNest;
                m.max_explore_ticks += params.explore_time_increment;
                break;
            }
            if (auto repulse = recovery_repulsion(percept, params)) {
                out.cmd = *repulse;
            } else {
                out.cmd = explore_policy(m, percept, params, rng);
            }
            break;
        }

        case TaState::ReturnToNest: {
            if (distance(pose.position, m.nest_position) <= m.nest_arrival_radius) {
                if (m.goal_found && !m.heard_goal_found) {
                    // First founder home: size the task and open the ledger.
                    m.ta_state = TaState::DecisionMaking;
                    m.is_founder = true;
                    const double l = estimate_path_length(m.found_explore_time, params.robot_speed);
                    RecruitLedger ledger;
                    ledger.needed = allocated_robots(l, params.max_visible_range, params.delta);
                    ledger.opened_tick = m.tick;
                    ledger.last_volunteer_tick = m.tick;
                    m.ledger = ledger;
                    out.notes.push_back({"founder_elected", ledger.needed});
                } else if (m.goal_found || m.heard_goal_found || percept.path_complete) {
                    m.ta_state = TaState::DecisionMaking;  // transition f
                    m.decision_idle_ticks = 0;
                } else {
                    m.ta_state = TaState::Exploring;  // transition a, next sortie
                    m.explore_ticks = 0;
                }
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

        case TaState::DecisionMaking: {
            if (m.is_founder) {
                // Founder collision: simultaneous discoveries resolve toward
                // the lower id before anyone has been acked.
                const Message* rival = nullptr;
                for (const Message& msg : inbox) {
                    if (std::holds_alternative<RecruitRequest>(msg.payload) &&
                        msg.sender < self_id) {
                        if (!rival || msg.sender < rival->sender) rival = &msg;
                    }
                }
                if (rival && m.ledger && m.ledger->acked_ids.empty() && !m.ledger->closed) {
                    m.is_founder = false;
                    m.ledger.reset();
                    m.founder_id = rival->sender;
                    out.notes.push_back({"founder_demoted", rival->sender});
                }
            }
            if (m.is_founder) {
                recruit_founder(m, inbox, params, out.outgoing, out.notes, self_id);
                if (m.ledger->closed && m.tick - m.ledger->close_tick >= detail::kCloseLinger) {
                    m.ta_state = TaState::InitiateTask;  // transition e, founder joins
                    m.initiated = true;
                }
            } else if (percept.path_complete && !m.volunteered) {
                m.ta_state = TaState::Resting;  // transition d
                m.rest_ticks_left = std::max<long>(1, m.rest_ticks_left);
            } else {
                recruit_worker(m, inbox, out.outgoing, out.notes, self_id);
            }
            break;
        }

        case TaState::InitiateTask:
            // One observable tick; the dispatcher switches this robot to the
            // path-formation controller on the next step.
            break;

        case TaState::Resting: {
            m.rest_ticks_left = std::max<long>(1, m.rest_ticks_left);
            out.cmd = homing_with_avoidance(pose, m.deployment_point, percept, params,
                                            rng.uniform(-kSeekJitter, kSeekJitter));
            break;
        }
    }

    out.led = led_for(m);
    return out;
}

}  // namespace swarmpath
