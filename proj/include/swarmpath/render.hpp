#pragma once
// Offline SVG rendering of trace snapshots: arena geometry, robot dots
// colored by LED state, stage chains (subgoal blue, first alignment
// purple, second alignment green) and the A* reference path in red.
// Rendering is a pure function of (trace, spec); identical inputs give
// byte-identical documents.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmpath/arena.hpp"
#include "swarmpath/astar.hpp"
#include "swarmpath/errors.hpp"
#include "swarmpath/geometry.hpp"

namespace swarmpath {

struct RenderLayers {
    bool arena = true;
    bool robots = true;
    bool chains = true;
    bool astar = true;

    bool any() const { return arena || robots || chains || astar; }
};

struct RenderSpec {
    enum class TickSelect { Single, Final, Stride };
    TickSelect select = TickSelect::Final;
    long tick = 0;     // for Single
    long stride = 1;   // for Stride
    RenderLayers layers;
    int image_size = 800;  // longest image side, pixels
};

namespace render_detail {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Transform {
    double scale = 1.0;
    double ox = 0.0, oy = 0.0;  // world origin offsets
    double img_w = 0.0, img_h = 0.0;

    double x(double wx) const { return (wx - ox) * scale; }
    double y(double wy) const { return img_h - (wy - oy) * scale; }  // world y up
};

/// Uniform world-to-image transform with a 5% margin.
inline Transform make_transform(const Rect& bounds, int image_size) {
    Transform t;
    const double margin_w = 0.05 * bounds.width();
    const double margin_h = 0.05 * bounds.height();
    const double world_w = bounds.width() + 2 * margin_w;
    const double world_h = bounds.height() + 2 * margin_h;
    t.scale = image_size / std::max(world_w, world_h);
    t.ox = bounds.min_corner.x - margin_w;
    t.oy = bounds.min_corner.y - margin_h;
    t.img_w = world_w * t.scale;
    t.img_h = world_h * t.scale;
    return t;
}

struct RobotDot {
    double x = 0, y = 0;
    std::string led;
};

struct ChainLine {
    std::string stage;
    std::vector<Point2> waypoints;
};

inline const char* chain_color(const std::string& stage) {
    if (stage == "subgoal") return "blue";
    if (stage == "opt1") return "purple";
    if (stage == "opt2") return "green";
    return "black";
}

inline const char* led_fill(const std::string& led) {
    if (led == "off") return "#999999";
    if (led == "yellow") return "#e6c800";
    return led.c_str();  // green/red/white/purple/blue/cyan/magenta/orange
}

}  // namespace render_detail

/// Compose one SVG document from a world snapshot.
inline std::string render_svg(const Scenario& scenario,
                              const std::vector<render_detail::RobotDot>& robots,
                              const std::vector<render_detail::ChainLine>& chains,
                              const std::vector<Point2>& astar_path,
                              const RenderSpec& spec) {
    using render_detail::num;
    const auto t = render_detail::make_transform(scenario.arena.bounds, spec.image_size);
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(t.img_w) +
           "\" height=\"" + num(t.img_h) + "\" viewBox=\"0 0 " + num(t.img_w) + " " +
           num(t.img_h) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(t.img_w) + "\" height=\"" + num(t.img_h) +
           "\" fill=\"#fbfbf8\"/>\n";

    auto rect_elem = [&](const Rect& r, const char* fill, const char* stroke) {
        svg += "<rect x=\"" + num(t.x(r.min_corner.x)) + "\" y=\"" + num(t.y(r.max_corner.y)) +
               "\" width=\"" + num(r.width() * t.scale) + "\" height=\"" +
               num(r.height() * t.scale) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
               "\"/>\n";
    };
    auto circle_elem = [&](Point2 c, double world_r, const std::string& fill,
                           const char* stroke) {
        svg += "<circle cx=\"" + num(t.x(c.x)) + "\" cy=\"" + num(t.y(c.y)) + "\" r=\"" +
               num(world_r * t.scale) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
    };
    auto polyline_elem = [&](const std::vector<Point2>& pts, const char* stroke,
                             const char* cls) {
        svg += "<polyline class=\"" + std::string(cls) + "\" fill=\"none\" stroke=\"" + stroke +
               "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg += ' ';
            svg += num(t.x(pts[i].x)) + "," + num(t.y(pts[i].y));
        }
        svg += "\"/>\n";
    };

    if (spec.layers.arena) {
        rect_elem(scenario.arena.bounds, "none", "#333333");
        for (const Obstacle& ob : scenario.arena.obstacles) rect_elem(ob, "#b0a89c", "#6b6458");
        circle_elem(scenario.arena.nest, scenario.arena.nest_radius, "#7ea4e0", "#2c5aa0");
        circle_elem(scenario.arena.goal, scenario.arena.goal_radius, "#e0c47e", "#a07b2c");
    }
    if (spec.layers.astar && astar_path.size() >= 2) {
        polyline_elem(astar_path, "red", "astar");
    }
    if (spec.layers.chains) {
        for (const auto& chain : chains)
            polyline_elem(chain.waypoints, render_detail::chain_color(chain.stage),
                          chain.stage.c_str());
    }
    if (spec.layers.robots) {
        for (const auto& dot : robots) {
            circle_elem({dot.x, dot.y}, scenario.params.robot_radius,
                        render_detail::led_fill(dot.led), "#222222");
        }
    }
    svg += "</svg>\n";
    return svg;
}

struct RenderedFrame {
    long tick = 0;
    std::string file_name;  // frame_<tick:08d>.svg
    std::string svg;
};

/// Render the requested frames from trace events. Throws ParseError when
/// the trace lacks a header and ValidationError when the requested tick
/// has no pose samples.
inline std::vector<RenderedFrame> render(const std::vector<nlohmann::json>& trace_events,
                                         const RenderSpec& spec) {
    if (!spec.layers.any()) throw ValidationError("layers", "at least one layer must be enabled");
    if (spec.stride < 1) throw ValidationError("stride", "must be >= 1");

    std::optional<Scenario> scenario;
    std::map<long, std::vector<render_detail::RobotDot>> poses;  // tick -> dots
    std::vector<std::pair<long, render_detail::ChainLine>> chains;

    for (const auto& ev : trace_events) {
        const std::string kind = ev.value("k", "");
        if (kind == "header") {
            scenario = load_scenario(ev.at("scenario").dump(), ev.value("name", ""));
        } else if (kind == "pose") {
            render_detail::RobotDot dot;
            dot.x = ev.at("x").get<double>();
            dot.y = ev.at("y").get<double>();
            dot.led = ev.value("led", "off");
            poses[ev.at("t").get<long>()].push_back(dot);
        } else if (kind == "chain") {
            render_detail::ChainLine line;
            line.stage = ev.value("stage", "");
            for (const auto& wp : ev.at("waypoints"))
                line.waypoints.push_back({wp[0].get<double>(), wp[1].get<double>()});
            chains.push_back({ev.at("t").get<long>(), std::move(line)});
        }
    }
    if (!scenario) throw ParseError("trace has no header record");
    if (poses.empty()) poses[0] = {};  // empty world: arena-only frame at tick 0

    std::vector<Point2> astar_path;
    if (spec.layers.astar) {
        try {
            const GridMap grid = rasterize(scenario->arena, scenario->params.robot_radius,
                                           scenario->params.robot_radius);
            const auto [ncol, nrow] = grid.cell_of(scenario->arena.nest);
            const auto [gcol, grow] = grid.cell_of(scenario->arena.goal);
            const GridPath path = astar(grid, {ncol, nrow}, {gcol, grow});
            astar_path.push_back(scenario->arena.nest);
            for (const GridCell& c : path.cells) {
                const Rect r = grid.cell_rect(c.col, c.row);
                astar_path.push_back(
                    {(r.min_corner.x + r.max_corner.x) / 2, (r.min_corner.y + r.max_corner.y) / 2});
            }
            astar_path.push_back(scenario->arena.goal);
        } catch (const std::exception&) {
            astar_path.clear();  // no reference path to draw
        }
    }

    std::vector<long> ticks;
    const long final_tick = poses.rbegin()->first;
    switch (spec.select) {
        case RenderSpec::TickSelect::Final:
            ticks.push_back(final_tick);
            break;
        case RenderSpec::TickSelect::Single:
            if (!poses.count(spec.tick))
                throw ValidationError("tick", "no pose samples at the requested tick");
            ticks.push_back(spec.tick);
            break;
        case RenderSpec::TickSelect::Stride:
            for (const auto& [tick, dots] : poses)
                if (tick % spec.stride == 0) ticks.push_back(tick);
            if (ticks.empty()) ticks.push_back(final_tick);
            break;
    }

    std::vector<RenderedFrame> frames;
    for (long tick : ticks) {
        std::vector<render_detail::ChainLine> stage_lines;
        std::set<std::string> seen;
        // Latest recording per stage visible at this tick.
        for (auto it = chains.rbegin(); it != chains.rend(); ++it) {
            if (it->first > tick) continue;
            if (seen.insert(it->second.stage).second) stage_lines.push_back(it->second);
        }
        std::reverse(stage_lines.begin(), stage_lines.end());

        RenderedFrame frame;
        frame.tick = tick;
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%08ld.svg", tick);
        frame.file_name = name;
        frame.svg = render_svg(*scenario, poses.at(tick), stage_lines, astar_path, spec);
        frames.push_back(std::move(frame));
    }
    return frames;
}

}  // namespace swarmpath
