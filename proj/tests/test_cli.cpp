// CLI smoke test: drives the built binary end to end through a shell.
// argv[1] = path to the swarmpath binary, argv[2] = bundled scenario dir.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "swarmpath/arena.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: test_cli <swarmpath-binary> <scenario-dir>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const std::string scenarios = argv[2];
    const fs::path work = fs::temp_directory_path() / "swarmpath_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);
    setenv("SWARMPATH_SCENARIO_DIR", scenarios.c_str(), 1);

    // validate: bundled scenario passes.
    expect(run_cmd(bin + " validate " + scenarios + "/open_1.json > /dev/null 2>&1") == 0,
           "validate open_1 exits 0");

    // validate: goal inside an obstacle exits 2 and names the field.
    const fs::path broken = work / "broken.json";
    {
        std::ofstream os(broken);
        os << R"({"arena": {"bounds": {"min": [0,0], "max": [200,200]},
                 "obstacles": [{"min": [140,90], "max": [170,120]}],
                 "nest": {"pos": [50,100], "radius": 12},
                 "goal": {"pos": [150,100], "radius": 8},
                 "class": "obstacle"}})";
    }
    const fs::path diag = work / "diag.txt";
    expect(run_cmd(bin + " validate " + broken.string() + " > /dev/null 2> " + diag.string()) ==
               2,
           "validate broken exits 2");
    expect(slurp(diag).find("goal") != std::string::npos, "diagnostic names the goal field");

    // unknown flag: usage error.
    expect(run_cmd(bin + " run --bogus 2> /dev/null") == 1, "unknown flag exits 1");

    // run: writes a trace and one metrics line on stdout.
    const fs::path trace = work / "trial.jsonl";
    const fs::path out = work / "run_stdout.txt";
    const std::string run_cmdline = bin + " run --scenario open_1 --seed 7 --robots 40" +
                                    " --allocation off --trace-out " + trace.string() + " > " +
                                    out.string() + " 2> /dev/null";
    expect(run_cmd(run_cmdline) == 0, "run exits 0");
    expect(fs::exists(trace), "trace file written");
    const std::string stdout_text = slurp(out);
    expect(stdout_text.find("\"k\":\"metrics\"") != std::string::npos,
           "stdout carries the metrics record");

    // determinism: identical argv twice gives byte-identical outputs.
    const fs::path trace2 = work / "trial2.jsonl";
    const fs::path out2 = work / "run_stdout2.txt";
    run_cmd(bin + " run --scenario open_1 --seed 7 --robots 40 --allocation off --trace-out " +
            trace2.string() + " > " + out2.string() + " 2> /dev/null");
    expect(slurp(trace) == slurp(trace2), "same argv -> identical trace bytes");
    expect(slurp(out) == slurp(out2), "same argv -> identical stdout");

    // render: final frame from the trace.
    const fs::path svg = work / "final.svg";
    expect(run_cmd(bin + " render --trace " + trace.string() + " --out " + svg.string() +
                   " --final 2> /dev/null") == 0,
           "render exits 0");
    expect(slurp(svg).find("<svg") != std::string::npos, "render wrote an SVG");

    // sweep + compare on a tiny grid.
    const fs::path sweep_dir = work / "sweep";
    expect(run_cmd(bin + " sweep --scenarios open_1 --counts 30 --seeds 1,2 --modes both" +
                   " --out-dir " + sweep_dir.string() + " --jobs 2 2> /dev/null") == 0,
           "sweep exits 0");
    expect(fs::exists(sweep_dir / "records.csv"), "sweep wrote records.csv");
    expect(fs::exists(sweep_dir / "summary.csv"), "sweep wrote summary.csv");
    const std::string records_text = slurp(sweep_dir / "records.csv");
    expect(static_cast<int>(std::count(records_text.begin(), records_text.end(), '\n')) == 5,
           "records.csv has header + 4 rows");

    const fs::path cmp = work / "compare.txt";
    expect(run_cmd(bin + " compare " + (sweep_dir / "records.csv").string() + " > " +
                   cmp.string() + " 2> /dev/null") == 0,
           "compare exits 0");
    expect(slurp(cmp).find("resource_reduction") != std::string::npos,
           "compare prints the summary header");

    // Bundled scenario files stay in sync with the in-code environments.
    for (const auto& sc : swarmpath::builtin_environments()) {
        const fs::path file = fs::path(scenarios) / (sc.name + ".json");
        expect(fs::exists(file), "bundled file exists: " + sc.name);
        if (!fs::exists(file)) continue;
        try {
            const auto loaded = swarmpath::load_scenario(slurp(file), sc.name);
            expect(loaded.arena == sc.arena && loaded.params == sc.params &&
                       loaded.robot_count == sc.robot_count,
                   "bundled file matches builtin: " + sc.name);
        } catch (const std::exception& e) {
            expect(false, "bundled file loads: " + sc.name + " (" + e.what() + ")");
        }
    }

    if (failures == 0) std::cout << "cli smoke test: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
