#pragma once

#include "shopstab/dynamics.hpp"
#include "shopstab/io.hpp"
#include "shopstab/measures.hpp"

#include <filesystem>

namespace shopstab {

// Classic job-shop generator: every job visits every machine exactly once
// in a seeded random order.
struct GeneratorConfig {
    int n_jobs = 6;
    int n_machines = 6;
    Tick duration_lo = 1;
    Tick duration_hi = 9;
    double tightness = 1.5;  // due = round(total processing * tightness)
    std::uint64_t seed = 0;
    std::string name;  // derived from shape and seed when empty
};

ProblemInstance generate_instance(const GeneratorConfig& cfg);

struct FactorMix {
    int machine_down = 0;
    int new_job = 0;
    int rush_job = 0;
    int cancel_job = 0;
    int due_date_change = 0;
    int weight_change = 0;

    int total() const {
        return machine_down + new_job + rush_job + cancel_job + due_date_change + weight_change;
    }
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    FactorMix mix;
    Tick down_lo = 5;   // breakdown length range
    Tick down_hi = 20;
    double new_job_tightness = 1.5;
    std::string name;  // derived from the seed when empty
};

struct GeneratedScenario {
    std::string name;
    std::vector<RescheduleEvent> events;  // ordered by t0
    std::vector<std::string> warnings;    // e.g. cancel dropped for lack of jobs
};

// Event times are drawn inside the active span of the instance's initial
// FCFS schedule, so every disturbance lands while work is still running.
GeneratedScenario generate_scenario(const ProblemInstance& instance, const ScenarioConfig& cfg);

// Shared parameter bundle for evaluating measures by name.
struct MeasureParams {
    double w_early = 1.0;
    double w_late = 1.0;
    double g_start = 1.0;
    double g_completion = 1.0;
    InstabilityConfig instab;
};

// Names: wu, lin, combined, job_level, sequence, sequence_machine,
// instability. Throws std::invalid_argument for anything else.
MeasureReport evaluate_measure(const std::string& name, const PairedSchedules& p,
                               const MeasureParams& params);
const std::vector<std::string>& known_measures();

struct PolicySpec {
    std::string label;
    RepairPolicy policy;
};

struct ExperimentConfig {
    std::vector<GeneratorConfig> instances;
    std::vector<ScenarioConfig> scenarios;  // each applied to every instance
    std::vector<PolicySpec> policies;
    std::vector<std::string> measures;
    MeasureParams measure_params;  // instab.t0 is taken from each event
    std::filesystem::path out_dir;  // empty: keep everything in memory
};

struct ReportRow {
    std::string instance;
    std::string scenario;
    std::string policy;
    std::optional<double> lambda;  // local search only
    int step = 0;                  // 1-based event index within the scenario
    std::string event_kind;
    std::string measure;
    double total = 0.0;
    int added = 0;
    int removed = 0;
    int skipped = 0;
    Tick makespan_before = 0;
    Tick makespan_after = 0;
    double twt_before = 0.0;
    double twt_after = 0.0;
    double runtime_ms = 0.0;  // repair time for the step; not reproducible
    std::string error;        // non-empty marks a failed cell
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<std::string> warnings;
};

// Runs the full (instance x scenario x policy) matrix: builds the initial
// FCFS schedule, applies the scenario's events one at a time, repairs with
// the policy, and scores every configured measure between consecutive
// schedules. A failing cell is recorded and skipped, not fatal. With a
// non-empty out_dir, every intermediate instance and schedule is persisted
// for reproduction, plus report.csv and metadata.json.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string report_to_csv(const ExperimentReport& report);

}  // namespace shopstab
