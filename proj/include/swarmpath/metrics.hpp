#pragma once
// Metric shaping and the multi-scenario experiment runner: per-trial
// records, CSV output, and the per-environment summary table (time and
// path length with/without allocation, A* reference, resource
// reduction, success rate).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "swarmpath/astar.hpp"
#include "swarmpath/engine.hpp"

namespace swarmpath {

/// Share of deployed robots excused from path formation, in percent.
inline double resource_reduction(int deployed, int allocated) {
    return 100.0 * static_cast<double>(deployed - allocated) / static_cast<double>(deployed);
}

struct MetricsRecord {
    std::string scenario;
    int robot_count = 0;
    std::uint64_t seed = 0;
    bool allocation_enabled = false;
    bool success = false;
    long time_ticks = 0;
    double chain_length_subgoal = 0.0;
    double chain_length_opt1 = 0.0;
    double chain_length_opt2 = 0.0;
    double astar_length = 0.0;
    int allocated = 0;
    int deployed = 0;
    double resource_reduction_pct = 0.0;

    /// Best refinement available: the second alignment when it completed,
    /// else the first, else the raw subgoal chain.
    double final_chain_length() const {
        if (chain_length_opt2 > 0.0) return chain_length_opt2;
        if (chain_length_opt1 > 0.0) return chain_length_opt1;
        return chain_length_subgoal;
    }
};

inline MetricsRecord make_metrics_record(const std::string& scenario_name,
                                         const TrialResult& trial, std::uint64_t seed,
                                         bool allocation, double astar_length,
                                         long max_sim_steps) {
    MetricsRecord rec;
    rec.scenario = scenario_name;
    rec.robot_count = trial.deployed;
    rec.seed = seed;
    rec.allocation_enabled = allocation;
    rec.success = trial.success;
    rec.time_ticks = trial.success ? trial.completion_tick : max_sim_steps;
    rec.chain_length_subgoal = trial.stage_length[0];
    rec.chain_length_opt1 = trial.stage_length[1];
    rec.chain_length_opt2 = trial.stage_length[2];
    rec.astar_length = astar_length;
    rec.allocated = trial.allocated;
    rec.deployed = trial.deployed;
    rec.resource_reduction_pct = resource_reduction(trial.deployed, trial.allocated);
    return rec;
}

// -------------------------------------------------------------------------
// CSV shaping (fixed-precision formatting keeps output byte-stable)

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace detail

inline std::string metrics_csv_header() {
    return "scenario,robot_count,seed,allocation,success,time_ticks,"
           "chain_length_subgoal,chain_length_opt1,chain_length_opt2,"
           "astar_length,allocated,deployed,resource_reduction";
}

inline std::string to_csv_row(const MetricsRecord& r) {
    std::string row = r.scenario;
    row += ',' + std::to_string(r.robot_count);
    row += ',' + std::to_string(r.seed);
    row += r.allocation_enabled ? ",on" : ",off";
    row += r.success ? ",1" : ",0";
    row += ',' + std::to_string(r.time_ticks);
    row += ',' + detail::fmt(r.chain_length_subgoal);
    row += ',' + detail::fmt(r.chain_length_opt1);
    row += ',' + detail::fmt(r.chain_length_opt2);
    row += ',' + detail::fmt(r.astar_length);
    row += ',' + std::to_string(r.allocated);
    row += ',' + std::to_string(r.deployed);
    row += ',' + detail::fmt(r.resource_reduction_pct);
    return row;
}

inline std::optional<MetricsRecord> from_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    if (fields.size() != 13 || fields[0] == "scenario") return std::nullopt;
    try {
        MetricsRecord r;
        r.scenario = fields[0];
        r.robot_count = std::stoi(fields[1]);
        r.seed = std::stoull(fields[2]);
        r.allocation_enabled = fields[3] == "on";
        r.success = fields[4] == "1";
        r.time_ticks = std::stol(fields[5]);
        r.chain_length_subgoal = std::stod(fields[6]);
        r.chain_length_opt1 = std::stod(fields[7]);
        r.chain_length_opt2 = std::stod(fields[8]);
        r.astar_length = std::stod(fields[9]);
        r.allocated = std::stoi(fields[10]);
        r.deployed = std::stoi(fields[11]);
        r.resource_reduction_pct = std::stod(fields[12]);
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline nlohmann::json metrics_to_json(const MetricsRecord& r) {
    return {{"k", "metrics"},
            {"t", r.time_ticks},
            {"r", -1},
            {"scenario", r.scenario},
            {"robot_count", r.robot_count},
            {"seed", r.seed},
            {"allocation", r.allocation_enabled ? "on" : "off"},
            {"success", r.success},
            {"time_ticks", r.time_ticks},
            {"chain_length_subgoal", r.chain_length_subgoal},
            {"chain_length_opt1", r.chain_length_opt1},
            {"chain_length_opt2", r.chain_length_opt2},
            {"astar_length", r.astar_length},
            {"allocated", r.allocated},
            {"deployed", r.deployed},
            {"resource_reduction", r.resource_reduction_pct}};
}

// -------------------------------------------------------------------------
// Experiment runner

struct TrialSpec {
    Scenario scenario;
    int robot_count = 0;
    std::uint64_t seed = 0;
    bool allocation = false;
};

/// Run one trial end to end; per-trial failures surface as success=false
/// records, never as exceptions (a sweep must not abort).
inline MetricsRecord run_trial(const TrialSpec& spec, Trace* trace = nullptr) {
    double astar_len = 0.0;
    try {
        astar_len = astar_world_length(spec.scenario.arena, spec.scenario.params);
    } catch (const std::exception&) {
        astar_len = 0.0;  // unreachable goal: record the trial as-is
    }
    World w = make_world(spec.scenario, spec.robot_count, spec.seed, spec.allocation);
    const TrialResult trial = run(w, trace);
    MetricsRecord rec = make_metrics_record(spec.scenario.name, trial, spec.seed,
                                            spec.allocation, astar_len,
                                            spec.scenario.params.max_sim_steps);
    if (trace) trace->emit(metrics_to_json(rec));
    return rec;
}

enum class AllocationMode { Off, On, Both };

/// One record per (scenario, count, seed, mode); with/without comparisons
/// share seeds. Trials may run on several worker threads; the returned
/// order is fixed by sorting on the trial key, so results are identical
/// for any job count.
inline std::vector<MetricsRecord> run_experiment(const std::vector<Scenario>& scenarios,
                                                 const std::vector<int>& robot_counts,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 AllocationMode mode, int jobs = 1) {
    std::vector<TrialSpec> specs;
    for (const Scenario& sc : scenarios) {
        for (int count : robot_counts) {
            for (std::uint64_t seed : seeds) {
                if (mode == AllocationMode::Off || mode == AllocationMode::Both)
                    specs.push_back({sc, count, seed, false});
                if (mode == AllocationMode::On || mode == AllocationMode::Both)
                    specs.push_back({sc, count, seed, true});
            }
        }
    }

    std::vector<MetricsRecord> records(specs.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) records[i] = run_trial(specs[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= specs.size()) return;
                records[i] = run_trial(specs[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(records.begin(), records.end(),
              [](const MetricsRecord& a, const MetricsRecord& b) {
                  if (a.scenario != b.scenario) return a.scenario < b.scenario;
                  if (a.robot_count != b.robot_count) return a.robot_count < b.robot_count;
                  if (a.seed != b.seed) return a.seed < b.seed;
                  return a.allocation_enabled < b.allocation_enabled;
              });
    return records;
}

// -------------------------------------------------------------------------
// Summary table (one row per environment, averages over seeds and counts)

struct SummaryRow {
    std::string scenario;
    int trials_without = 0;
    int trials_with = 0;
    double success_rate_without = 0.0;
    double success_rate_with = 0.0;
    double time_without = 0.0;  // mean ticks over successful trials
    double time_with = 0.0;
    double astar_length = 0.0;
    double length_without = 0.0;  // mean final chain length over successes
    double length_with = 0.0;
    double resource_reduction_pct = 0.0;  // mean over allocation-on trials
};

inline std::vector<SummaryRow> summarize_records(const std::vector<MetricsRecord>& records) {
    std::map<std::string, std::vector<const MetricsRecord*>> by_scenario;
    for (const auto& r : records) by_scenario[r.scenario].push_back(&r);

    std::vector<SummaryRow> rows;
    for (const auto& [name, recs] : by_scenario) {
        SummaryRow row;
        row.scenario = name;
        double time_wo = 0, time_w = 0, len_wo = 0, len_w = 0, rr = 0, astar_sum = 0;
        int succ_wo = 0, succ_w = 0, rr_n = 0;
        for (const MetricsRecord* r : recs) {
            astar_sum += r->astar_length;
            if (r->allocation_enabled) {
                ++row.trials_with;
                rr += r->resource_reduction_pct;
                ++rr_n;
                if (r->success) {
                    ++succ_w;
                    time_w += static_cast<double>(r->time_ticks);
                    len_w += r->final_chain_length();
                }
            } else {
                ++row.trials_without;
                if (r->success) {
                    ++succ_wo;
                    time_wo += static_cast<double>(r->time_ticks);
                    len_wo += r->final_chain_length();
                }
            }
        }
        row.success_rate_without =
            row.trials_without ? 100.0 * succ_wo / row.trials_without : 0.0;
        row.success_rate_with = row.trials_with ? 100.0 * succ_w / row.trials_with : 0.0;
        row.time_without = succ_wo ? time_wo / succ_wo : 0.0;
        row.time_with = succ_w ? time_w / succ_w : 0.0;
        row.length_without = succ_wo ? len_wo / succ_wo : 0.0;
        row.length_with = succ_w ? len_w / succ_w : 0.0;
        row.astar_length = recs.empty() ? 0.0 : astar_sum / static_cast<double>(recs.size());
        row.resource_reduction_pct = rr_n ? rr / rr_n : 0.0;
        rows.push_back(row);
    }
    return rows;
}

inline std::string summary_csv_header() {
    return "scenario,trials_without,trials_with,success_rate_without,success_rate_with,"
           "time_without,time_with,astar_length,length_without,length_with,"
           "resource_reduction";
}

inline std::string to_csv_row(const SummaryRow& r) {
    std::string row = r.scenario;
    row += ',' + std::to_string(r.trials_without);
    row += ',' + std::to_string(r.trials_with);
    row += ',' + detail::fmt(r.success_rate_without);
    row += ',' + detail::fmt(r.success_rate_with);
    row += ',' + detail::fmt(r.time_without);
    row += ',' + detail::fmt(r.time_with);
    row += ',' + detail::fmt(r.astar_length);
    row += ',' + detail::fmt(r.length_without);
    row += ',' + detail::fmt(r.length_with);
    row += ',' + detail::fmt(r.resource_reduction_pct);
    return row;
}

}  // namespace swarmpath
