#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "swarmpath/pathformation.hpp"
#include "swarmpath/rng.hpp"
#include "swarmpath/robot.hpp"

using namespace swarmpath;

namespace {

struct FixedRng {
    double value = 0.0;
    double uniform(double, double) { return value; }
};

Percept base_percept(Point2 pos = {0, 0}, double heading = 0.0) {
    Percept p;
    p.self_pose = {pos, Angle(heading)};
    return p;
}

LedSighting led(LedColor color, double range, double bearing, int id) {
    return {color, range, Angle(bearing), id};
}

RobotMemory exploring_memory() {
    RobotMemory m;
    m.controller = ControllerKind::PathFormation;
    m.state = PfState::Exploring;
    m.nest_position = {-120, 0};
    m.nest_arrival_radius = 15.0;
    m.max_explore_ticks = 1000;
    return m;
}

const std::span<const Message> kNoInbox{};

}  // namespace

TEST_CASE("exploring robot spotting the goal at 28 starts forming a subgoal") {
    RobotMemory m = exploring_memory();
    Percept p = base_percept();
    p.goal = {true, 28.0, Angle(0.2)};
    FixedRng rng;
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::Subgoal);
    CHECK(!out.memory.subgoal_static);
    REQUIRE(out.memory.tracked_beacon.has_value());
    CHECK(out.memory.tracked_beacon->ref.kind == BeaconRef::Kind::GoalPoint);
    CHECK(out.led == LedColor::White);
}

TEST_CASE("goal beyond detect range does not trigger formation") {
    RobotMemory m = exploring_memory();
    Percept p = base_percept();
    p.goal = {true, 31.0, Angle(0.0)};
    FixedRng rng;
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::Exploring);
}

TEST_CASE("red/blue/cyan robots count as beacons, white and green do not") {
    FixedRng rng;
    for (LedColor color : {LedColor::Red, LedColor::Blue, LedColor::Cyan}) {
        RobotMemory m = exploring_memory();
        Percept p = base_percept();
        p.visible_leds.push_back(led(color, 25, 0.0, 7));
        const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
        CHECK(out.memory.state == PfState::Subgoal);
        CHECK(out.memory.tracked_beacon->ref.robot_id == 7);
    }
    for (LedColor color : {LedColor::White, LedColor::Green, LedColor::Magenta}) {
        RobotMemory m = exploring_memory();
        Percept p = base_percept();
        p.visible_leds.push_back(led(color, 25, 0.0, 7));
        const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
        CHECK(out.memory.state == PfState::Exploring);
    }
}

TEST_CASE("exhausted exploration budget sends the robot home and bumps the schedule") {
    RobotMemory m = exploring_memory();
    m.explore_ticks = 1000;  // next tick exceeds the budget
    FixedRng rng;
    const SimParams params;
    const ControllerOutput out = pf_step(m, base_percept(), kNoInbox, params, rng);
    CHECK(out.memory.state == PfState::ReturnToNest);
    CHECK(out.memory.max_explore_ticks == 1000 + params.explore_time_increment);
    CHECK(out.led == LedColor::Yellow);
}

TEST_CASE("forming robot that loses its beacon switches to recovery") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Subgoal;
    m.subgoal_static = false;
    m.tracked_beacon = TrackedBeacon{BeaconRef::robot(3), 50.0, Angle(0)};
    FixedRng rng;
    const ControllerOutput out = pf_step(m, base_percept(), kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::RecoveryBehavior);
    CHECK(out.led == LedColor::Magenta);
    CHECK(out.cmd.linear == 0.0);
    CHECK(!out.memory.tracked_beacon.has_value());
}

TEST_CASE("forming robot freezes in the 70..100 window, keeps moving below it") {
    FixedRng rng;
    auto step_with_beacon_range = [&](double range) {
        RobotMemory m = exploring_memory();
        m.state = PfState::Subgoal;
        m.subgoal_static = false;
        m.tracked_beacon = TrackedBeacon{BeaconRef::robot(3), range - 1, Angle(0)};
        m.nest_position = {120, 0};  // nest dead ahead, beacon behind
        Percept p = base_percept();
        p.visible_leds.push_back(led(LedColor::Red, range, kPi, 3));
        return pf_step(m, p, kNoInbox, SimParams{}, rng);
    };

    const ControllerOutput moving = step_with_beacon_range(69.5);
    CHECK(!moving.memory.subgoal_static);
    CHECK(moving.cmd.linear > 0.0);
    CHECK(moving.led == LedColor::White);

    const ControllerOutput frozen = step_with_beacon_range(70.2);
    CHECK(frozen.memory.subgoal_static);
    CHECK(frozen.cmd.linear == 0.0);
    CHECK(frozen.led == LedColor::Red);
    REQUIRE(frozen.memory.goalside_ref.has_value());
    CHECK(frozen.memory.goalside_ref->robot_id == 3);
    CHECK(!frozen.memory.tracked_beacon.has_value());

    // Boundary rule: visible at the edge of the camera range still freezes.
    const ControllerOutput edge = step_with_beacon_range(99.9);
    CHECK(edge.memory.subgoal_static);
}

TEST_CASE("recovery robot holds position until the completion cue, then rests") {
    RobotMemory m = exploring_memory();
    m.state = PfState::RecoveryBehavior;
    FixedRng rng;
    const ControllerOutput held = pf_step(m, base_percept(), kNoInbox, SimParams{}, rng);
    CHECK(held.memory.state == PfState::RecoveryBehavior);
    CHECK(held.cmd.linear == 0.0);
    CHECK(held.outgoing.empty());

    Percept done = base_percept();
    done.path_complete = true;
    const ControllerOutput rest = pf_step(m, done, kNoInbox, SimParams{}, rng);
    CHECK(rest.memory.state == PfState::Resting);
    CHECK(rest.memory.rest_ticks_left > 0);
    CHECK(rest.led == LedColor::Off);
}

TEST_CASE("explore_policy: nest behind and zero jitter goes straight ahead") {
    RobotMemory m = exploring_memory();
    m.nest_position = {-120, 0};
    Percept p = base_percept({0, 0}, 0.0);  // heading +x, nest straight behind
    FixedRng rng;  // jitter 0
    const VelocityCmd cmd = explore_policy(m, p, SimParams{}, rng);
    CHECK(cmd.angular == doctest::Approx(0.0));
    CHECK(cmd.linear == doctest::Approx(1.0));
}

TEST_CASE("explore_policy: obstacle inside proximity range forces an avoidance turn") {
    RobotMemory m = exploring_memory();
    Percept p = base_percept({0, 0}, 0.0);
    FixedRng rng;

    p.proximity.push_back({Angle(0.0), 6.0});  // dead ahead
    const VelocityCmd head_on = explore_policy(m, p, SimParams{}, rng);
    CHECK(std::abs(head_on.angular) > 0.0);

    // Avoidance is tangential with a fixed rotational side, so nearby
    // obstacles on either bow produce the same turn direction.
    p.proximity.clear();
    p.proximity.push_back({Angle(0.3), 6.0});
    const VelocityCmd left = explore_policy(m, p, SimParams{}, rng);
    CHECK(left.angular > 0.0);

    p.proximity.clear();
    p.proximity.push_back({Angle(-0.3), 6.0});
    const VelocityCmd right = explore_policy(m, p, SimParams{}, rng);
    CHECK(right.angular > 0.0);

    // Beyond the proximity range the reading is ignored.
    p.proximity.clear();
    p.proximity.push_back({Angle(0.0), 25.0});
    const VelocityCmd clear_path = explore_policy(m, p, SimParams{}, rng);
    CHECK(clear_path.angular == doctest::Approx(0.0));
}

TEST_CASE("explore_policy drives the swarm away from the nest on average") {
    // Single robot in a huge empty arena, 100 seeds, 500 ticks.
    ArenaConfig arena;
    arena.bounds = {{-5000, -5000}, {5000, 5000}};
    arena.nest = {0, 0};
    arena.goal = {4000, 4000};
    const SimParams params;

    const int kSeeds = 100;
    const int kTicks = 500;
    std::vector<double> mean_distance(kTicks + 1, 0.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        RngStream rng(seed, 0);
        RobotMemory m = exploring_memory();
        m.nest_position = {0, 0};
        RobotSnapshot self{0, {{0, 0}, Angle(rng.uniform(-kPi, kPi))}, LedColor::Green};
        for (int t = 0; t <= kTicks; ++t) {
            mean_distance[t] += distance(self.pose.position, arena.nest) / kSeeds;
            const Percept p = build_percept(self, std::vector<RobotSnapshot>{self}, arena, params);
            const VelocityCmd cmd = explore_policy(m, p, params, rng);
            self.pose = integrate_motion(self.pose, cmd);
        }
    }
    for (int t = 10; t <= kTicks; t += 10) {
        CHECK(mean_distance[t] > mean_distance[t - 10]);
    }
    CHECK(mean_distance[kTicks] > 100.0);
}

TEST_CASE("recovery_repulsion overrides within range 20 only") {
    SimParams params;
    Percept p = base_percept({0, 0}, 0.0);

    p.visible_leds.push_back(led(LedColor::Magenta, 19.0, 0.0, 5));
    const auto hit = recovery_repulsion(p, params);
    REQUIRE(hit.has_value());
    // Direct repulsion: desired heading is bearing + pi; a half-turn is
    // clamped to the actuator limit.
    CHECK(std::abs(hit->angular) == doctest::Approx(kMaxTurnPerTick));

    p.visible_leds.clear();
    p.visible_leds.push_back(led(LedColor::Magenta, 25.0, 0.0, 5));
    CHECK(!recovery_repulsion(p, params).has_value());
}

TEST_CASE("recovery_repulsion picks the nearest magenta, ties to the lower id") {
    SimParams params;
    Percept p = base_percept({0, 0}, 0.0);
    p.visible_leds.push_back(led(LedColor::Magenta, 15.0, 1.0, 9));
    p.visible_leds.push_back(led(LedColor::Magenta, 12.0, -1.0, 4));
    const auto away = recovery_repulsion(p, params);
    REQUIRE(away.has_value());
    // Repulsed from the nearer magenta at bearing -1: desired is wrap(-1 + pi),
    // positive, so the turn is positive (and clamped).
    CHECK(away->angular > 0.0);

    Percept tie = base_percept({0, 0}, 0.0);
    tie.visible_leds.push_back(led(LedColor::Magenta, 15.0, 1.0, 9));
    tie.visible_leds.push_back(led(LedColor::Magenta, 15.0, -1.0, 4));
    const auto tied = recovery_repulsion(tie, params);
    REQUIRE(tied.has_value());
    CHECK(tied->angular > 0.0);  // lower id at bearing -1 wins
}

TEST_CASE("alignment_geometry copies the neighbor sightings") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Optimization1;
    m.goalside_ref = BeaconRef::robot(1);
    m.nestside_ref = BeaconRef::robot(2);
    m.tracked_beacon = TrackedBeacon{*m.goalside_ref, 70, Angle(0)};

    Percept p = base_percept({0, 0}, 0.0);
    p.visible_leds.push_back(led(LedColor::Red, 70, 0.0, 1));
    p.visible_leds.push_back(led(LedColor::Blue, 70, kPi, 2));
    const auto geom = alignment_geometry(p, m);
    REQUIRE(geom.has_value());
    CHECK(geom->theta1.radians() == doctest::Approx(0.0));
    CHECK(geom->theta2.radians() == doctest::Approx(kPi));
    CHECK(geom->x == doctest::Approx(70.0));
    CHECK(geom->y == doctest::Approx(70.0));

    Percept occluded = base_percept({0, 0}, 0.0);
    occluded.visible_leds.push_back(led(LedColor::Blue, 70, kPi, 2));
    CHECK(!alignment_geometry(occluded, m).has_value());

    Percept arbitrary = base_percept({0, 0}, 0.0);
    arbitrary.visible_leds.push_back(led(LedColor::Red, 60, 0.2, 1));
    arbitrary.visible_leds.push_back(led(LedColor::Blue, 80, -2.9, 2));
    const auto g2 = alignment_geometry(arbitrary, m);
    REQUIRE(g2.has_value());
    CHECK(g2->theta1.radians() == doctest::Approx(0.2));
    CHECK(g2->theta2.radians() == doctest::Approx(-2.9));
    CHECK(g2->x == doctest::Approx(60.0));
    CHECK(g2->y == doctest::Approx(80.0));
}

TEST_CASE("alignment_error: collinear zero, right angle pi/2") {
    AlignmentGeometry g;
    g.theta1 = Angle(0.0);
    g.theta2 = Angle(kPi);
    CHECK(alignment_error(g).radians() == doctest::Approx(0.0));
    g.theta2 = Angle(kPi / 2);
    CHECK(alignment_error(g).radians() == doctest::Approx(kPi / 2));
}

TEST_CASE("alignment_error matches the coordinate-geometry oracle") {
    RngStream rng(616, 0);
    for (int i = 0; i < 1000; ++i) {
        const Point2 p{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        const Point2 a{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        const Point2 b{rng.uniform(-50, 50), rng.uniform(-50, 50)};
        if (distance(p, a) < 1e-3 || distance(p, b) < 1e-3) continue;
        const double heading = rng.uniform(-kPi, kPi);

        AlignmentGeometry g;
        g.theta1 = signed_angle_diff(direction(p, a), Angle(heading));
        g.theta2 = signed_angle_diff(direction(p, b), Angle(heading));
        g.x = distance(p, a);
        g.y = distance(p, b);

        // Oracle: interior angle at vertex p from raw coordinates.
        const Point2 u = a - p;
        const Point2 v = b - p;
        const double cosang =
            std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0);
        const double vertex_angle = std::acos(cosang);
        const double expected = kPi - vertex_angle;
        CHECK(alignment_error(g).radians() == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("optimization_step is a fixed point when already aligned") {
    AlignmentGeometry g;
    g.theta1 = Angle(0.0);
    g.theta2 = Angle(kPi);
    g.x = g.y = 70;
    g.goal_side = {70, 0};
    g.nest_side = {-70, 0};
    const Pose pose{{0, 0}, Angle(0.3)};
    const auto [cmd, done] = optimization_step(g, pose, SimParams{});
    CHECK(done);
    CHECK(cmd.linear == 0.0);
    CHECK(cmd.angular == 0.0);
}

TEST_CASE("alignment error decreases monotonically in the isolated three-point fixture") {
    // Two fixed beacons, one aligning robot, empty world.
    const Point2 a{70, 0};   // goal-side
    const Point2 b{-70, 0};  // nest-side
    const SimParams params;
    Pose pose{{10, 25}, Angle(0.0)};

    auto geometry_at = [&](const Pose& self) {
        AlignmentGeometry g;
        g.theta1 = signed_angle_diff(direction(self.position, a), self.heading);
        g.theta2 = signed_angle_diff(direction(self.position, b), self.heading);
        g.x = distance(self.position, a);
        g.y = distance(self.position, b);
        g.goal_side = a;
        g.nest_side = b;
        return g;
    };

    double last_error = alignment_error(geometry_at(pose)).radians();
    const double initial_error = last_error;
    bool done = false;
    int ticks = 0;
    for (; ticks < 200 && !done; ++ticks) {
        const auto [cmd, finished] = optimization_step(geometry_at(pose), pose, params);
        done = finished;
        pose = integrate_motion(pose, cmd);
        const double err = alignment_error(geometry_at(pose)).radians();
        CHECK(err <= last_error + 1e-6);
        last_error = err;
    }
    CHECK(done);
    CHECK(last_error <= params.opt_error_tolerance);
    CHECK(ticks < 10 * (initial_error / 0.01) + 30);
}

TEST_CASE("cascade: first frozen subgoal near the nest starts optimization 1") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Subgoal;
    m.subgoal_static = true;
    m.goalside_ref = BeaconRef::robot(3);
    FixedRng rng;

    Percept p = base_percept({0, 0}, 0.0);
    p.path_complete = true;
    p.nest = {true, 80.0, Angle(kPi)};
    p.visible_leds.push_back(led(LedColor::Red, 70, 0.0, 3));  // formation parent
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::Optimization1);
    REQUIRE(out.memory.nestside_ref.has_value());
    CHECK(out.memory.nestside_ref->kind == BeaconRef::Kind::NestPoint);
    CHECK(out.led == LedColor::Purple);

    // Without the completion cue the subgoal stays frozen red.
    Percept early = p;
    early.path_complete = false;
    const ControllerOutput held = pf_step(m, early, kNoInbox, SimParams{}, rng);
    CHECK(held.memory.state == PfState::Subgoal);
    CHECK(held.led == LedColor::Red);
}

TEST_CASE("cascade: a subgoal whose nest-side neighbor turned blue follows") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Subgoal;
    m.subgoal_static = true;
    m.goalside_ref = BeaconRef::robot(3);
    FixedRng rng;

    Percept p = base_percept({0, 0}, 0.0);
    p.path_complete = true;
    p.visible_leds.push_back(led(LedColor::Red, 70, 0.0, 3));
    p.visible_leds.push_back(led(LedColor::Blue, 72, kPi, 8));
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::Optimization1);
    CHECK(out.memory.nestside_ref->kind == BeaconRef::Kind::Robot);
    CHECK(out.memory.nestside_ref->robot_id == 8);
}

TEST_CASE("cascade: goal-adjacent sub-nest with opt1 done starts optimization 2") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Optimization1;
    m.role_flags.opt1_done = true;
    m.role_flags.is_subnest = true;
    m.goalside_ref = BeaconRef::goal_point();
    m.nestside_ref = BeaconRef::robot(2);
    m.tracked_beacon = TrackedBeacon{*m.goalside_ref, 70, Angle(0)};
    FixedRng rng;

    Percept p = base_percept({0, 0}, 0.0);
    p.path_complete = true;
    p.goal = {true, 70.0, Angle(0.0)};
    p.visible_leds.push_back(led(LedColor::Blue, 70, kPi, 2));
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::Optimization2);
    CHECK(out.led == LedColor::Purple);

    // A mid-chain sub-nest instead waits for its goal-side neighbor to turn cyan.
    RobotMemory mid = m;
    mid.goalside_ref = BeaconRef::robot(9);
    mid.tracked_beacon = TrackedBeacon{*mid.goalside_ref, 70, Angle(0)};
    Percept q = base_percept({0, 0}, 0.0);
    q.path_complete = true;
    q.visible_leds.push_back(led(LedColor::Blue, 70, 0.0, 9));
    q.visible_leds.push_back(led(LedColor::Blue, 70, kPi, 2));
    const ControllerOutput waiting = pf_step(mid, q, kNoInbox, SimParams{}, rng);
    CHECK(waiting.memory.state == PfState::Optimization1);

    q.visible_leds[0].color = LedColor::Cyan;
    const ControllerOutput go = pf_step(mid, q, kNoInbox, SimParams{}, rng);
    CHECK(go.memory.state == PfState::Optimization2);
}

TEST_CASE("aligning robot that loses a neighbor transitions to recovery") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Optimization1;
    m.goalside_ref = BeaconRef::robot(1);
    m.nestside_ref = BeaconRef::robot(2);
    m.tracked_beacon = TrackedBeacon{*m.goalside_ref, 70, Angle(0)};
    FixedRng rng;

    Percept p = base_percept({0, 0}, 0.0);
    p.visible_leds.push_back(led(LedColor::Blue, 70, kPi, 2));  // goal-side missing
    const ControllerOutput out = pf_step(m, p, kNoInbox, SimParams{}, rng);
    CHECK(out.memory.state == PfState::RecoveryBehavior);
    CHECK(out.led == LedColor::Magenta);
}

TEST_CASE("led table is total and collision free across states") {
    RobotMemory m = exploring_memory();
    m.state = PfState::Resting;
    m.rest_ticks_left = 5;
    CHECK(led_for(m) == LedColor::Off);
    m.state = PfState::Exploring;
    CHECK(led_for(m) == LedColor::Green);
    m.state = PfState::ReturnToNest;
    CHECK(led_for(m) == LedColor::Yellow);
    m.state = PfState::Subgoal;
    m.subgoal_static = false;
    CHECK(led_for(m) == LedColor::White);
    m.subgoal_static = true;
    CHECK(led_for(m) == LedColor::Red);
    m.state = PfState::RecoveryBehavior;
    CHECK(led_for(m) == LedColor::Magenta);
    m.state = PfState::Optimization1;
    CHECK(led_for(m) == LedColor::Purple);
    m.role_flags.opt1_done = true;
    CHECK(led_for(m) == LedColor::Blue);
    m.state = PfState::Optimization2;
    CHECK(led_for(m) == LedColor::Purple);
    m.role_flags.opt2_done = true;
    CHECK(led_for(m) == LedColor::Cyan);
}
