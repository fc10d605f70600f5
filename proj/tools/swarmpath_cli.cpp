// swarmpath command-line front end: run one trial, sweep experiments,
// summarize results against the A* reference, render traces, validate
// scenario files.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 trial
// failure under --strict.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmpath/engine.hpp"
#include "swarmpath/errors.hpp"
#include "swarmpath/metrics.hpp"
#include "swarmpath/render.hpp"
#include "swarmpath/trace.hpp"

namespace fs = std::filesystem;
using namespace swarmpath;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTrialFailure = 3;

std::string scenario_dir() {
    if (const char* env = std::getenv("SWARMPATH_SCENARIO_DIR")) return env;
    return "scenarios";
}

/// Accepts a path, a bundled name ("open_1"), or a name with .json.
fs::path resolve_scenario(const std::string& ref) {
    if (fs::exists(ref)) return ref;
    const fs::path dir = scenario_dir();
    for (const auto& candidate : {dir / ref, dir / (ref + ".json")}) {
        if (fs::exists(candidate)) return candidate;
    }
    throw ValidationError("scenario", "cannot find scenario '" + ref + "' (searched " +
                                          dir.string() + ")");
}

Scenario load_scenario_file(const std::string& ref) {
    const fs::path path = resolve_scenario(ref);
    std::ifstream is(path);
    if (!is) throw ValidationError("scenario", "cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return load_scenario(ss.str(), path.stem().string());
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("out", "cannot write '" + path.string() + "'");
    os << text;
}

std::vector<std::uint64_t> parse_seed_list(const std::vector<std::string>& items) {
    // Accepts plain seeds and first..last ranges.
    std::vector<std::uint64_t> seeds;
    for (const std::string& item : items) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(std::stoull(item));
        } else {
            const std::uint64_t lo = std::stoull(item.substr(0, dots));
            const std::uint64_t hi = std::stoull(item.substr(dots + 2));
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        }
    }
    return seeds;
}

int cmd_run(const std::string& scenario_ref, std::uint64_t seed, int robots,
            const std::string& allocation, const std::string& trace_out, bool strict) {
    Scenario sc = load_scenario_file(scenario_ref);
    if (robots > 0) sc.robot_count = robots;
    const bool alloc_on = allocation == "on";

    std::cerr << "scenario=" << sc.name << " seed=" << seed << " robots=" << sc.robot_count
              << " allocation=" << allocation << "\nparams=" << params_to_json(sc.params).dump()
              << "\n";

    Trace trace;
    TrialSpec spec{sc, sc.robot_count, seed, alloc_on};
    const MetricsRecord rec = run_trial(spec, &trace);
    if (!trace_out.empty()) trace.write_file(trace_out);
    std::cout << metrics_to_json(rec).dump() << "\n";
    if (strict && !rec.success) return kExitTrialFailure;
    return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& scenario_refs, const std::vector<int>& counts,
              const std::vector<std::string>& seed_items, const std::string& modes,
              const std::string& out_dir, int jobs) {
    std::vector<Scenario> scenarios;
    for (const std::string& ref : scenario_refs) scenarios.push_back(load_scenario_file(ref));
    const std::vector<std::uint64_t> seeds = parse_seed_list(seed_items);

    AllocationMode mode = AllocationMode::Both;
    if (modes == "on") mode = AllocationMode::On;
    else if (modes == "off") mode = AllocationMode::Off;
    else if (modes != "both") throw ValidationError("modes", "expected on, off, or both");

    const auto records = run_experiment(scenarios, counts, seeds, mode, jobs);

    std::string records_csv = metrics_csv_header() + "\n";
    for (const auto& r : records) records_csv += to_csv_row(r) + "\n";
    std::string summary_csv = summary_csv_header() + "\n";
    for (const auto& row : summarize_records(records)) summary_csv += to_csv_row(row) + "\n";

    write_text_file(fs::path(out_dir) / "records.csv", records_csv);
    write_text_file(fs::path(out_dir) / "summary.csv", summary_csv);
    std::cerr << records.size() << " records -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& metrics_file) {
    std::ifstream is(metrics_file);
    if (!is) throw ValidationError("metrics", "cannot open '" + metrics_file + "'");
    std::vector<MetricsRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        if (auto rec = from_csv_row(line)) records.push_back(*rec);
    }
    if (records.empty()) throw ValidationError("metrics", "no records in '" + metrics_file + "'");

    std::cout << summary_csv_header() << "\n";
    for (const auto& row : summarize_records(records)) std::cout << to_csv_row(row) << "\n";
    return kExitOk;
}

int cmd_render(const std::string& trace_path, const std::string& out,
               std::optional<long> tick, bool final_tick, std::optional<long> stride,
               int size, const std::string& layers_csv) {
    RenderSpec spec;
    spec.image_size = size;
    if (tick) {
        spec.select = RenderSpec::TickSelect::Single;
        spec.tick = *tick;
    } else if (stride) {
        spec.select = RenderSpec::TickSelect::Stride;
        spec.stride = *stride;
    } else {
        (void)final_tick;  // default
        spec.select = RenderSpec::TickSelect::Final;
    }
    if (!layers_csv.empty()) {
        spec.layers = {false, false, false, false};
        std::stringstream ss(layers_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "arena") spec.layers.arena = true;
            else if (item == "robots") spec.layers.robots = true;
            else if (item == "chains") spec.layers.chains = true;
            else if (item == "astar") spec.layers.astar = true;
            else throw ValidationError("layers", "unknown layer '" + item + "'");
        }
    }

    const auto events = read_trace_file(trace_path);
    const auto frames = render(events, spec);
    if (frames.size() == 1 && !fs::is_directory(out) &&
        (fs::path(out).extension() == ".svg")) {
        write_text_file(out, frames[0].svg);
        std::cerr << "wrote " << out << "\n";
    } else {
        for (const auto& frame : frames)
            write_text_file(fs::path(out) / frame.file_name, frame.svg);
        std::cerr << "wrote " << frames.size() << " frame(s) -> " << out << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_ref) {
    const Scenario sc = load_scenario_file(scenario_ref);
    std::cout << "ok: " << sc.name << " class=" << to_string(sc.arena.environment_class)
              << " obstacles=" << sc.arena.obstacles.size() << " robots=" << sc.robot_count
              << " deployment_points=" << sc.arena.deployment_points.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarmpath: subgoal-based swarm path formation simulator"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Run one trial and write its trace");
    std::string run_scenario, run_alloc = "off", run_trace_out;
    std::uint64_t run_seed = 0;
    int run_robots = 0;
    bool run_strict = false;
    run_cmd->add_option("--scenario", run_scenario, "Scenario file or bundled name")->required();
    run_cmd->add_option("--seed", run_seed, "Trial seed");
    run_cmd->add_option("--robots", run_robots, "Robot count (default: scenario value)");
    run_cmd->add_option("--allocation", run_alloc, "Task allocation on|off")
        ->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--trace-out", run_trace_out, "Trace output file (JSON lines)");
    run_cmd->add_flag("--strict", run_strict, "Exit 3 when the trial fails");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment grid, write CSV results");
    std::vector<std::string> sweep_scenarios, sweep_seeds;
    std::vector<int> sweep_counts;
    std::string sweep_modes = "both", sweep_out = "results";
    int sweep_jobs = 1;
    sweep_cmd->add_option("--scenarios", sweep_scenarios, "Scenario files or bundled names")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--counts", sweep_counts, "Robot counts")->required()->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds (e.g. 1,2,3 or 1..10)")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--modes", sweep_modes, "Allocation modes: on|off|both");
    sweep_cmd->add_option("--out-dir", sweep_out, "Output directory");
    sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads")->check(CLI::PositiveNumber);

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "Summarize a records CSV into the per-environment table");
    std::string compare_file;
    compare_cmd->add_option("metrics", compare_file, "records.csv from sweep")->required();

    // render
    auto* render_cmd = app.add_subcommand("render", "Render SVG frames from a trace");
    std::string render_trace, render_out = "frames", render_layers;
    std::optional<long> render_tick, render_stride;
    bool render_final = false;
    int render_size = 800;
    render_cmd->add_option("--trace", render_trace, "Trace file")->required();
    render_cmd->add_option("--out", render_out, "Output file (.svg) or directory");
    render_cmd->add_option("--tick", render_tick, "Render one sampled tick");
    render_cmd->add_flag("--final", render_final, "Render the final tick (default)");
    render_cmd->add_option("--stride", render_stride, "Render every sampled tick % stride == 0");
    render_cmd->add_option("--size", render_size, "Image size in pixels");
    render_cmd->add_option("--layers", render_layers,
                           "Comma list of arena,robots,chains,astar (default: all)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
    std::string validate_scenario;
    validate_cmd->add_option("scenario", validate_scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(run_scenario, run_seed, run_robots, run_alloc, run_trace_out,
                           run_strict);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_scenarios, sweep_counts, sweep_seeds, sweep_modes, sweep_out,
                             sweep_jobs);
        if (compare_cmd->parsed()) return cmd_compare(compare_file);
        if (render_cmd->parsed())
            return cmd_render(render_trace, render_out, render_tick, render_final, render_stride,
                              render_size, render_layers);
        if (validate_cmd->parsed()) return cmd_validate(validate_scenario);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
