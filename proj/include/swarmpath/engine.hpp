#pragma once
// Deterministic lock-step simulation engine. Each tick: freeze a
// snapshot, sense, deliver last tick's messages within comm range, step
// every controller in ascending id order, then integrate and resolve
// motion in ascending id order. Identical (scenario, seed) inputs yield
// byte-identical traces, regardless of how many trials run in parallel
// elsewhere.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swarmpath/allocation.hpp"
#include "swarmpath/arena.hpp"
#include "swarmpath/chain.hpp"
#include "swarmpath/controller_types.hpp"
#include "swarmpath/messages.hpp"
#include "swarmpath/pathformation.hpp"
#include "swarmpath/rng.hpp"
#include "swarmpath/robot.hpp"
#include "swarmpath/trace.hpp"

namespace swarmpath {

/// Deterministic substream for one robot (the documented generator:
/// SplitMix64 seeded from mixed (seed, robot_id)).
inline RngStream seeded_rng(std::uint64_t seed, int robot_id) {
    return RngStream(seed, static_cast<std::uint64_t>(robot_id));
}

struct RobotState {
    int id = -1;
    Pose pose;
    LedColor led = LedColor::Off;
    RobotMemory memory;
    RngStream rng;
};

struct StageRecord {
    bool recorded = false;
    long tick = -1;
    Chain chain;
    double length = 0.0;
};

struct World {
    long tick = 0;
    ArenaConfig arena;
    SimParams params;
    std::vector<RobotState> robots;  // id-ascending, ids are indices
    std::vector<Message> message_queue;  // sent last tick, delivered this tick
    bool allocation_enabled = false;
    std::string scenario_name;
    std::uint64_t seed = 0;

    bool path_complete = false;
    long completion_tick = -1;
    StageRecord stages[3];  // indexed by ChainStage

    StageRecord& stage(ChainStage s) { return stages[static_cast<int>(s)]; }
    const StageRecord& stage(ChainStage s) const { return stages[static_cast<int>(s)]; }
};

/// Spawn a world: one robot per deployment point, heading away from the
/// nest, every controller in its exploring state.
inline World make_world(const Scenario& scenario, int robot_count, std::uint64_t seed,
                        bool allocation_enabled) {
    if (robot_count > static_cast<int>(scenario.arena.deployment_points.size()))
        throw ValidationError("robots.count", "exceeds available deployment points");

    World w;
    w.arena = scenario.arena;
    w.params = scenario.params;
    w.params.rng_seed = seed;
    w.allocation_enabled = allocation_enabled;
    w.scenario_name = scenario.name;
    w.seed = seed;
    w.robots.reserve(robot_count);
    for (int id = 0; id < robot_count; ++id) {
        RobotState r;
        r.id = id;
        const Point2 dp = scenario.arena.deployment_points[id];
        r.pose.position = dp;
        const Point2 away = dp - scenario.arena.nest;
        r.pose.heading = norm(away) > 1e-12 ? Angle(std::atan2(away.y, away.x)) : Angle(0.0);

        RobotMemory& m = r.memory;
        m.deployment_point = dp;
        m.nest_position = scenario.arena.nest;
        // Arrival tolerance: a full swarm cannot pack inside the nest disc,
        // so "reached the nest" extends to the crowding ring around it.
        m.nest_arrival_radius = 3.0 * scenario.arena.nest_radius;
        if (allocation_enabled) {
            m.controller = ControllerKind::TaskAllocation;
            m.ta_state = TaState::Exploring;
            m.max_explore_ticks = scenario.params.min_explore_time;
        } else {
            m.controller = ControllerKind::PathFormation;
            m.state = PfState::Exploring;
            m.max_explore_ticks = 2 * scenario.params.min_explore_time;
        }
        r.led = led_for(m);
        r.rng = seeded_rng(seed, id);
        w.robots.push_back(std::move(r));
    }
    return w;
}

namespace detail {

/// Switch a robot leaving InitiateTask onto the path-formation controller,
/// then dispatch to whichever FSM is live.
inline ControllerOutput dispatch_step(const RobotMemory& memory, const Percept& percept,
                                      std::span<const Message> inbox, const SimParams& params,
                                      RngStream& rng, int self_id) {
    if (memory.controller == ControllerKind::TaskAllocation) {
        if (memory.ta_state == TaState::InitiateTask) {
            RobotMemory switched = memory;
            switched.controller = ControllerKind::PathFormation;
            switched.state = PfState::Exploring;
            switched.explore_ticks = 0;
            switched.max_explore_ticks = 2 * params.min_explore_time;
            return pf_step(switched, percept, inbox, params, rng);
        }
        return ta_step(memory, percept, inbox, params, rng, self_id);
    }
    return pf_step(memory, percept, inbox, params, rng);
}

inline nlohmann::json point_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

inline void emit_chain_event(Trace* trace, long tick, ChainStage stage, const Chain& chain,
                             double length) {
    if (!trace) return;
    nlohmann::json waypoints = nlohmann::json::array();
    for (const Point2& p : chain.waypoints) waypoints.push_back(point_json(p));
    trace->emit({{"k", "chain"},
                 {"t", tick},
                 {"r", -1},
                 {"stage", to_string(stage)},
                 {"length", length},
                 {"waypoints", waypoints},
                 {"members", chain.member_ids}});
}

inline void sample_poses(const World& w, Trace* trace) {
    if (!trace) return;
    for (const RobotState& r : w.robots) {
        trace->emit({{"k", "pose"},
                     {"t", w.tick},
                     {"r", r.id},
                     {"x", r.pose.position.x},
                     {"y", r.pose.position.y},
                     {"h", r.pose.heading.radians()},
                     {"led", to_string(r.led)}});
    }
}

}  // namespace detail

/// Attempt to record a stage chain from the current world state.
inline bool try_record_stage(World& w, ChainStage stage, Trace* trace) {
    StageRecord& rec = w.stage(stage);
    if (rec.recorded) return true;
    std::vector<RobotSnapshot> snap;
    snap.reserve(w.robots.size());
    for (const RobotState& r : w.robots) snap.push_back({r.id, r.pose, r.led});
    auto chain = extract_chain(snap, w.arena, w.params, stage);
    if (!chain) return false;
    rec.recorded = true;
    rec.tick = w.tick;
    rec.chain = std::move(*chain);
    rec.length = chain_length(rec.chain);
    detail::emit_chain_event(trace, w.tick, stage, rec.chain, rec.length);
    return true;
}

/// Advance the world by one tick. Phase order is fixed: snapshot, sense,
/// deliver, controllers (ascending id), motion (ascending id), chain
/// bookkeeping, tick increment.
inline void step(World& w, Trace* trace = nullptr) {
    // (1) freeze snapshot
    std::vector<RobotSnapshot> snap;
    snap.reserve(w.robots.size());
    for (const RobotState& r : w.robots) snap.push_back({r.id, r.pose, r.led});

    // (2) sense against the snapshot
    std::vector<Percept> percepts;
    percepts.reserve(w.robots.size());
    for (const RobotState& r : w.robots)
        percepts.push_back(
            build_percept(snap[r.id], snap, w.arena, w.params, w.path_complete));

    // (3) deliver last tick's messages, gated by comm range now
    std::vector<std::vector<Message>> inboxes(w.robots.size());
    for (const Message& msg : w.message_queue) {
        if (msg.sender < 0 || msg.sender >= static_cast<int>(w.robots.size())) continue;
        const Point2 from = snap[msg.sender].pose.position;
        auto deliver = [&](int rid) {
            if (rid == msg.sender) return;
            if (distance(from, snap[rid].pose.position) > w.params.comm_range) return;
            inboxes[rid].push_back(msg);
            if (trace)
                trace->emit({{"k", "msg"},
                             {"t", w.tick},
                             {"r", rid},
                             {"from", msg.sender},
                             {"payload", payload_name(msg.payload)}});
        };
        if (msg.is_broadcast()) {
            for (const RobotState& r : w.robots) deliver(r.id);
        } else if (msg.receiver >= 0 && msg.receiver < static_cast<int>(w.robots.size())) {
            deliver(msg.receiver);
        }
    }
    w.message_queue.clear();

    // (4)+(5) controllers in ascending id order; collect commands/messages
    std::vector<VelocityCmd> cmds(w.robots.size());
    bool any_froze = false;
    bool any_opt1_done = false;
    bool any_opt2_done = false;
    for (RobotState& r : w.robots) {
        RobotMemory before = r.memory;
        before.tick = w.tick;
        ControllerOutput out =
            detail::dispatch_step(before, percepts[r.id], inboxes[r.id], w.params, r.rng, r.id);

        if (trace) {
            if (out.memory.controller != before.controller) {
                trace->emit({{"k", "switch"}, {"t", w.tick}, {"r", r.id}});
            } else if (before.controller == ControllerKind::PathFormation &&
                       out.memory.state != before.state) {
                trace->emit({{"k", "st"},
                             {"t", w.tick},
                             {"r", r.id},
                             {"fsm", "pf"},
                             {"from", to_string(before.state)},
                             {"to", to_string(out.memory.state)}});
            } else if (before.controller == ControllerKind::TaskAllocation &&
                       out.memory.ta_state != before.ta_state) {
                trace->emit({{"k", "st"},
                             {"t", w.tick},
                             {"r", r.id},
                             {"fsm", "ta"},
                             {"from", to_string(before.ta_state)},
                             {"to", to_string(out.memory.ta_state)}});
            }
            for (const ControllerNote& note : out.notes)
                trace->emit({{"k", "note"},
                             {"t", w.tick},
                             {"r", r.id},
                             {"note", note.kind},
                             {"v", note.value}});
        }
        for (const ControllerNote& note : out.notes) {
            if (note.kind == "froze_subgoal") any_froze = true;
            if (note.kind == "opt1_done") any_opt1_done = true;
            if (note.kind == "opt2_done") any_opt2_done = true;
        }

        r.memory = out.memory;
        r.led = out.led;
        cmds[r.id].linear = std::clamp(out.cmd.linear, 0.0, w.params.robot_speed);
        cmds[r.id].angular = std::clamp(out.cmd.angular, -kMaxTurnPerTick, kMaxTurnPerTick);
        for (Message& msg : out.outgoing) {
            msg.sender = r.id;
            w.message_queue.push_back(std::move(msg));
        }
    }

    // (6) integrate + resolve motion in ascending id order
    std::vector<Point2> centers;
    centers.reserve(w.robots.size());
    for (const RobotState& r : w.robots) centers.push_back(r.pose.position);
    std::vector<Point2> others(centers.size() > 0 ? centers.size() - 1 : 0);
    for (RobotState& r : w.robots) {
        if (cmds[r.id].linear == 0.0 && cmds[r.id].angular == 0.0) continue;
        const Pose proposed = integrate_motion(r.pose, cmds[r.id]);
        std::size_t k = 0;
        for (std::size_t i = 0; i < centers.size(); ++i)
            if (static_cast<int>(i) != r.id) others[k++] = centers[i];
        r.pose = resolve_collision(r.pose, proposed, w.arena, w.params, others);
        centers[r.id] = r.pose.position;
    }

    // (7) chain bookkeeping on freeze/alignment events
    if (!w.path_complete && (any_froze || w.tick == 0)) {
        if (try_record_stage(w, ChainStage::Subgoal, trace)) {
            w.path_complete = true;
            w.completion_tick = w.tick;
        }
    }
    if (w.path_complete && any_opt1_done) try_record_stage(w, ChainStage::Opt1, trace);
    if (w.path_complete && any_opt2_done) try_record_stage(w, ChainStage::Opt2, trace);

    ++w.tick;
}

/// Outcome of one trial, independent of how metrics are shaped later.
struct TrialResult {
    bool success = false;
    long completion_tick = -1;
    long end_tick = 0;
    int deployed = 0;
    int allocated = 0;
    double stage_length[3] = {0.0, 0.0, 0.0};
    bool stage_recorded[3] = {false, false, false};
    long stage_tick[3] = {-1, -1, -1};
};

inline TrialResult summarize(const World& w) {
    TrialResult res;
    res.success = w.path_complete;
    res.completion_tick = w.completion_tick;
    res.end_tick = w.tick;
    res.deployed = static_cast<int>(w.robots.size());
    if (w.allocation_enabled) {
        int n = 0;
        for (const RobotState& r : w.robots)
            if (r.memory.initiated) ++n;
        res.allocated = n;
    } else {
        res.allocated = res.deployed;
    }
    for (int s = 0; s < 3; ++s) {
        res.stage_recorded[s] = w.stages[s].recorded;
        res.stage_length[s] = w.stages[s].length;
        res.stage_tick[s] = w.stages[s].tick;
    }
    return res;
}

using StopCondition = std::function<bool(const World&)>;

/// Step until the stop condition holds or max_sim_steps is reached. The
/// default stop is "second alignment chain recorded". Emits the trace
/// header, periodic pose samples, and a final pose sample.
inline TrialResult run(World& w, Trace* trace = nullptr, StopCondition stop = {}) {
    if (!stop) stop = [](const World& world) { return world.stage(ChainStage::Opt2).recorded; };

    if (trace) {
        trace->emit({{"k", "header"},
                     {"t", -1},
                     {"r", -1},
                     {"name", w.scenario_name},
                     {"seed", w.seed},
                     {"robots", static_cast<int>(w.robots.size())},
                     {"allocation", w.allocation_enabled},
                     {"arena_bounds",
                      {detail::point_json(w.arena.bounds.min_corner),
                       detail::point_json(w.arena.bounds.max_corner)}},
                     {"scenario", nlohmann::json::parse(emit_scenario(Scenario{
                                      w.scenario_name, w.arena, w.params,
                                      static_cast<int>(w.robots.size())}))}});
    }

    long last_sampled = -1;
    while (w.tick < w.params.max_sim_steps && !stop(w)) {
        if (trace && w.tick % kTracePoseStride == 0) {
            detail::sample_poses(w, trace);
            last_sampled = w.tick;
        }
        step(w, trace);
    }
    if (trace && last_sampled != w.tick) detail::sample_poses(w, trace);
    return summarize(w);
}

}  // namespace swarmpath
