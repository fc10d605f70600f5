#pragma once
// Shared controller state: the two finite state machines, per-robot
// memory, and the LED color table keyed on controller state.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swarmpath/geometry.hpp"
#include "swarmpath/messages.hpp"
#include "swarmpath/robot.hpp"

namespace swarmpath {

/// Path-formation states (the a-k transition model).
enum class PfState {
    Resting,
    Exploring,
    ReturnToNest,
    Subgoal,
    DecisionMaking,
    RecoveryBehavior,
    Optimization1,
    Optimization2,
};

/// Task-allocation states (the a-f transition model).
enum class TaState {
    Exploring,
    ReturnToNest,
    DecisionMaking,
    InitiateTask,
    Resting,
};

inline const char* to_string(PfState s) {
    switch (s) {
        case PfState::Resting: return "resting";
        case PfState::Exploring: return "exploring";
        case PfState::ReturnToNest: return "return_to_nest";
        case PfState::Subgoal: return "subgoal";
        case PfState::DecisionMaking: return "decision_making";
        case PfState::RecoveryBehavior: return "recovery";
        case PfState::Optimization1: return "optimization1";
        case PfState::Optimization2: return "optimization2";
    }
    return "?";
}

inline const char* to_string(TaState s) {
    switch (s) {
        case TaState::Exploring: return "exploring";
        case TaState::ReturnToNest: return "return_to_nest";
        case TaState::DecisionMaking: return "decision_making";
        case TaState::InitiateTask: return "initiate_task";
        case TaState::Resting: return "resting";
    }
    return "?";
}

/// A beacon a robot can navigate against: the goal, the nest, or another
/// robot's LED identified by id.
struct BeaconRef {
    enum class Kind { GoalPoint, NestPoint, Robot } kind = Kind::GoalPoint;
    int robot_id = -1;

    static BeaconRef goal_point() { return {Kind::GoalPoint, -1}; }
    static BeaconRef nest_point() { return {Kind::NestPoint, -1}; }
    static BeaconRef robot(int id) { return {Kind::Robot, id}; }

    friend bool operator==(const BeaconRef&, const BeaconRef&) = default;
};

struct TrackedBeacon {
    BeaconRef ref;
    double last_range = 0.0;
    Angle last_bearing;
};

struct RoleFlags {
    bool is_subnest = false;
    bool opt1_done = false;
    bool opt2_done = false;
};

/// Founder-side recruitment bookkeeping.
struct RecruitLedger {
    int needed = 0;
    std::set<int> acked_ids;
    bool closed = false;
    long opened_tick = 0;
    long last_volunteer_tick = 0;
    long close_tick = -1;
};

enum class ControllerKind { TaskAllocation, PathFormation };

/// Per-robot controller memory. One struct carries both FSMs; `controller`
/// selects which one is live. Controllers never touch world state: they
/// read a Percept and an inbox and return a new memory value.
struct RobotMemory {
    ControllerKind controller = ControllerKind::PathFormation;

    // --- path formation ---
    PfState state = PfState::Exploring;
    long explore_ticks = 0;
    long max_explore_ticks = 1000;
    double sortie_offset = 0.0;   // per-sortie rotation of the exploration field
    long wall_contact_ticks = 0;  // sustained proximity contact while traveling
    std::optional<TrackedBeacon> tracked_beacon;
    long rest_ticks_left = 0;
    RoleFlags role_flags;
    bool subgoal_static = false;  // Subgoal has a forming and a frozen phase
    std::optional<BeaconRef> goalside_ref;  // neighbor toward the goal (formation parent)
    std::optional<BeaconRef> nestside_ref;  // neighbor toward the nest (alignment anchor)
    long cascade_wait_ticks = 0;  // ticks spent waiting for the alignment turn
    long stalled_ticks = 0;       // consecutive alignment ticks without movement
    Point2 prev_position;

    // --- task allocation ---
    TaState ta_state = TaState::Exploring;
    bool is_founder = false;
    bool goal_found = false;
    std::optional<Point2> goal_hint;  // the founder keeps the goal position it saw
    long found_explore_time = 0;
    bool heard_goal_found = false;
    bool volunteered = false;
    int founder_id = -1;
    long decision_idle_ticks = 0;
    std::optional<RecruitLedger> ledger;
    bool initiated = false;  // ever passed through InitiateTask

    // --- shared ---
    Point2 deployment_point;
    Point2 nest_position;
    double nest_arrival_radius = 15.0;
    long tick = 0;  // engine clock, for schedule bookkeeping
};

/// LED color table: a total function of controller state. Red, white and
/// blue are fixed by the behavior narrative; the rest are assigned so the
/// mapping stays collision free.
inline LedColor led_for(const RobotMemory& m) {
    if (m.controller == ControllerKind::TaskAllocation) {
        switch (m.ta_state) {
            case TaState::Exploring: return LedColor::Green;
            case TaState::ReturnToNest:
                return m.goal_found ? LedColor::White : LedColor::Yellow;
            case TaState::DecisionMaking: return LedColor::Orange;
            case TaState::InitiateTask: return LedColor::Orange;
            case TaState::Resting: return LedColor::Off;
        }
    }
    switch (m.state) {
        case PfState::Resting: return LedColor::Off;
        case PfState::Exploring: return LedColor::Green;
        case PfState::ReturnToNest: return LedColor::Yellow;
        case PfState::Subgoal:
            return m.subgoal_static ? LedColor::Red : LedColor::White;
        case PfState::DecisionMaking: return LedColor::Orange;
        case PfState::RecoveryBehavior: return LedColor::Magenta;
        case PfState::Optimization1:
            return m.role_flags.opt1_done ? LedColor::Blue : LedColor::Purple;
        case PfState::Optimization2:
            return m.role_flags.opt2_done ? LedColor::Cyan : LedColor::Purple;
    }
    return LedColor::Off;
}

/// Side-channel notes a controller attaches to its output; the engine
/// turns them into trace events. `kind` doubles as the event name.
struct ControllerNote {
    std::string kind;
    long value = 0;
};

struct ControllerOutput {
    VelocityCmd cmd;
    LedColor led = LedColor::Off;
    std::vector<Message> outgoing;
    RobotMemory memory;
    std::vector<ControllerNote> notes;
};

}  // namespace swarmpath
