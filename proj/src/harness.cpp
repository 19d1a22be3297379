#include "shopstab/harness.hpp"

#include "shopstab/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace shopstab {

namespace {

std::string default_instance_name(const GeneratorConfig& cfg) {
    return "js" + std::to_string(cfg.n_jobs) + "x" + std::to_string(cfg.n_machines) + "_s" +
           std::to_string(cfg.seed);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ProblemInstance generate_instance(const GeneratorConfig& cfg) {
    if (cfg.n_jobs < 1 || cfg.n_machines < 1)
        throw std::invalid_argument("generator needs at least one job and one machine");
    if (cfg.duration_lo < 1 || cfg.duration_hi < cfg.duration_lo)
        throw std::invalid_argument("generator duration range is empty or non-positive");
    if (!(cfg.tightness > 0.0))
        throw std::invalid_argument("generator tightness must be positive");

    Rng rng(cfg.seed);
    ProblemInstance instance;
    instance.name = cfg.name.empty() ? default_instance_name(cfg) : cfg.name;
    for (int m = 0; m < cfg.n_machines; ++m) instance.machines.push_back("M" + std::to_string(m));

    Tick total_all = 0;
    for (int j = 0; j < cfg.n_jobs; ++j) {
        Job job;
        job.id = "J" + std::to_string(j);
        job.weight = static_cast<double>(rng.uniform(1, 9));
        std::vector<std::string> route = instance.machines;
        rng.shuffle(route);
        Tick total = 0;
        for (int k = 0; k < cfg.n_machines; ++k) {
            Operation op;
            op.job = job.id;
            op.op = k + 1;
            op.machine = route[static_cast<std::size_t>(k)];
            op.duration = rng.uniform(cfg.duration_lo, cfg.duration_hi);
            total += op.duration;
            job.operations.push_back(std::move(op));
        }
        job.due = static_cast<Tick>(std::llround(static_cast<double>(total) * cfg.tightness));
        total_all += total;
        instance.jobs.push_back(std::move(job));
    }
    instance.horizon = std::max<Tick>(1, total_all);
    instance.check();
    return instance;
}

GeneratedScenario generate_scenario(const ProblemInstance& instance, const ScenarioConfig& cfg) {
    GeneratedScenario out;
    out.name = cfg.name.empty() ? "sc" + std::to_string(cfg.seed) : cfg.name;

    auto shared = std::make_shared<const ProblemInstance>(instance);
    Tick span = makespan(build_initial_schedule(shared));
    if (span < 2) span = 2;

    Rng rng(cfg.seed);
    std::vector<std::pair<EventKind, Tick>> skeleton;
    auto draw_times = [&](EventKind kind, int count) {
        for (int i = 0; i < count; ++i) skeleton.push_back({kind, rng.uniform(1, span - 1)});
    };
    draw_times(EventKind::machine_down, cfg.mix.machine_down);
    draw_times(EventKind::new_job, cfg.mix.new_job);
    draw_times(EventKind::rush_job, cfg.mix.rush_job);
    draw_times(EventKind::cancel_job, cfg.mix.cancel_job);
    draw_times(EventKind::due_date_change, cfg.mix.due_date_change);
    draw_times(EventKind::weight_change, cfg.mix.weight_change);
    std::stable_sort(skeleton.begin(), skeleton.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });

    Tick dur_lo = std::numeric_limits<Tick>::max(), dur_hi = 1;
    for (const Operation* op : instance.all_ops()) {
        dur_lo = std::min(dur_lo, op->duration);
        dur_hi = std::max(dur_hi, op->duration);
    }
    if (dur_lo > dur_hi) dur_lo = dur_hi = 1;

    std::set<std::string> canceled;
    int arrivals = 0;
    for (const auto& [kind, t0] : skeleton) {
        RescheduleEvent e;
        e.kind = kind;
        e.t0 = t0;
        switch (kind) {
            case EventKind::machine_down: {
                e.machine = instance.machines[static_cast<std::size_t>(
                    rng.uniform(0, static_cast<Tick>(instance.machines.size()) - 1))];
                e.from = t0;
                e.until = e.from + rng.uniform(cfg.down_lo, cfg.down_hi);
                break;
            }
            case EventKind::new_job:
            case EventKind::rush_job: {
                Job job;
                job.id = (kind == EventKind::new_job ? "N" : "R") + std::to_string(arrivals++);
                job.weight = static_cast<double>(rng.uniform(1, 9));
                std::vector<std::string> route = instance.machines;
                rng.shuffle(route);
                Tick total = 0;
                for (std::size_t k = 0; k < route.size(); ++k) {
                    Operation op;
                    op.job = job.id;
                    op.op = static_cast<int>(k) + 1;
                    op.machine = route[k];
                    op.duration = rng.uniform(dur_lo, dur_hi);
                    total += op.duration;
                    job.operations.push_back(std::move(op));
                }
                job.due = t0 + static_cast<Tick>(std::llround(static_cast<double>(total) *
                                                              cfg.new_job_tightness));
                e.job = std::move(job);
                break;
            }
            case EventKind::cancel_job: {
                std::vector<std::string> pool;
                for (const Job& j : instance.jobs)
                    if (!canceled.count(j.id)) pool.push_back(j.id);
                if (pool.empty()) {
                    out.warnings.push_back("cancel_job at t0=" + std::to_string(t0) +
                                           " skipped: no cancellable job remains");
                    continue;
                }
                e.job_id = pool[static_cast<std::size_t>(
                    rng.uniform(0, static_cast<Tick>(pool.size()) - 1))];
                canceled.insert(e.job_id);
                break;
            }
            case EventKind::due_date_change:
            case EventKind::weight_change: {
                std::vector<std::string> pool;
                for (const Job& j : instance.jobs)
                    if (!canceled.count(j.id)) pool.push_back(j.id);
                if (pool.empty()) {
                    out.warnings.push_back(to_string(kind) + " at t0=" + std::to_string(t0) +
                                           " skipped: no job remains");
                    continue;
                }
                e.job_id = pool[static_cast<std::size_t>(
                    rng.uniform(0, static_cast<Tick>(pool.size()) - 1))];
                if (kind == EventKind::due_date_change)
                    e.new_due = rng.uniform(t0, span + span / 2);
                else
                    e.new_weight = static_cast<double>(rng.uniform(1, 9));
                break;
            }
        }
        out.events.push_back(std::move(e));
    }
    return out;
}

MeasureReport evaluate_measure(const std::string& name, const PairedSchedules& p,
                               const MeasureParams& params) {
    if (name == "wu") return wu_measure(p);
    if (name == "lin") return lin_measure(p);
    if (name == "combined") return combined_measure(p, params.w_early, params.w_late);
    if (name == "job_level") return job_level_measure(p, params.g_start, params.g_completion);
    if (name == "sequence") return sequence_measure(p, SequenceScope::global);
    if (name == "sequence_machine") return sequence_measure(p, SequenceScope::per_machine);
    if (name == "instability") return instability(p, params.instab);
    throw std::invalid_argument("unknown measure: " + name);
}

const std::vector<std::string>& known_measures() {
    static const std::vector<std::string> names{
        "wu", "lin", "combined", "job_level", "sequence", "sequence_machine", "instability"};
    return names;
}

namespace {

using nlohmann::json;

json policy_to_json(const PolicySpec& spec) {
    json j{{"label", spec.label}};
    switch (spec.policy.kind) {
        case RepairPolicy::Kind::right_shift:
            j["kind"] = "right_shift";
            break;
        case RepairPolicy::Kind::regenerate:
            j["kind"] = "regenerate";
            j["rule"] = to_string(spec.policy.rule);
            break;
        case RepairPolicy::Kind::local_search:
            j["kind"] = "local_search";
            j["lambda"] = spec.policy.ls.lambda;
            j["utility"] = to_string(spec.policy.ls.utility);
            j["budget"] = spec.policy.ls.iteration_budget;
            j["seed"] = spec.policy.ls.seed;
            break;
    }
    return j;
}

json metadata_json(const ExperimentConfig& cfg) {
    json meta;
    meta["instances"] = json::array();
    for (const GeneratorConfig& g : cfg.instances)
        meta["instances"].push_back({{"name", g.name.empty() ? default_instance_name(g) : g.name},
                                     {"jobs", g.n_jobs},
                                     {"machines", g.n_machines},
                                     {"duration_lo", g.duration_lo},
                                     {"duration_hi", g.duration_hi},
                                     {"tightness", g.tightness},
                                     {"seed", g.seed}});
    meta["scenarios"] = json::array();
    for (const ScenarioConfig& s : cfg.scenarios)
        meta["scenarios"].push_back({{"name", s.name.empty() ? "sc" + std::to_string(s.seed) : s.name},
                                     {"seed", s.seed},
                                     {"mix",
                                      {{"machine_down", s.mix.machine_down},
                                       {"new_job", s.mix.new_job},
                                       {"rush_job", s.mix.rush_job},
                                       {"cancel_job", s.mix.cancel_job},
                                       {"due_date_change", s.mix.due_date_change},
                                       {"weight_change", s.mix.weight_change}}},
                                     {"down_lo", s.down_lo},
                                     {"down_hi", s.down_hi}});
    meta["policies"] = json::array();
    for (const PolicySpec& p : cfg.policies) meta["policies"].push_back(policy_to_json(p));
    meta["measures"] = cfg.measures;
    meta["measure_params"] = {{"w_early", cfg.measure_params.w_early},
                              {"w_late", cfg.measure_params.w_late},
                              {"g_start", cfg.measure_params.g_start},
                              {"g_completion", cfg.measure_params.g_completion},
                              {"decay", cfg.measure_params.instab.decay},
                              {"include_frozen", cfg.measure_params.instab.include_frozen}};
    return meta;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport report;
    const bool persist = !cfg.out_dir.empty();
    if (persist) std::filesystem::create_directories(cfg.out_dir);

    for (const GeneratorConfig& icfg : cfg.instances) {
        auto instance = std::make_shared<const ProblemInstance>(generate_instance(icfg));
        Schedule initial = build_initial_schedule(instance);

        for (const ScenarioConfig& scfg : cfg.scenarios) {
            GeneratedScenario scenario = generate_scenario(*instance, scfg);
            for (const std::string& w : scenario.warnings)
                report.warnings.push_back(instance->name + "/" + scenario.name + ": " + w);
            if (persist) {
                auto dir = cfg.out_dir / instance->name / scenario.name;
                std::filesystem::create_directories(dir);
                save_events(scenario.events, dir / "events.json");
            }

            for (const PolicySpec& spec : cfg.policies) {
                std::filesystem::path cell_dir;
                if (persist) {
                    cell_dir = cfg.out_dir / instance->name / scenario.name / spec.label;
                    std::filesystem::create_directories(cell_dir);
                    save_instance(*instance, cell_dir / "step_0_instance.json");
                    save_schedule(initial, cell_dir / "step_0_schedule.json");
                }
                std::optional<double> lambda;
                if (spec.policy.kind == RepairPolicy::Kind::local_search)
                    lambda = spec.policy.ls.lambda;

                Schedule current = initial;
                if (scenario.events.empty()) {
                    // Nothing happened: score the schedule against itself so
                    // the cell still shows up in the report.
                    ReportRow base;
                    base.instance = instance->name;
                    base.scenario = scenario.name;
                    base.policy = spec.label;
                    base.lambda = lambda;
                    base.step = 0;
                    base.event_kind = "none";
                    base.makespan_before = base.makespan_after = makespan(current);
                    base.twt_before = base.twt_after = total_weighted_tardiness(current);
                    PairedSchedules paired = pair_schedules(current, current);
                    for (const std::string& name : cfg.measures) {
                        ReportRow row = base;
                        row.measure = name;
                        row.total = evaluate_measure(name, paired, cfg.measure_params).total;
                        report.rows.push_back(std::move(row));
                    }
                    continue;
                }
                int step = 0;
                for (const RescheduleEvent& event : scenario.events) {
                    ++step;
                    ReportRow base;
                    base.instance = instance->name;
                    base.scenario = scenario.name;
                    base.policy = spec.label;
                    base.lambda = lambda;
                    base.step = step;
                    base.event_kind = to_string(event.kind);
                    base.makespan_before = makespan(current);
                    base.twt_before = total_weighted_tardiness(current);

                    try {
                        auto t_start = std::chrono::steady_clock::now();
                        ApplyResult ctx = apply_event(*current.instance, current, event);
                        RepairPolicy policy = spec.policy;
                        policy.ls.instab = cfg.measure_params.instab;
                        policy.ls.instab.t0 = event.t0;
                        Schedule revised = repair(ctx, current, policy);
                        auto t_end = std::chrono::steady_clock::now();
                        base.runtime_ms =
                            std::chrono::duration<double, std::milli>(t_end - t_start).count();

                        auto violations = validate(revised);
                        if (!violations.empty())
                            throw std::runtime_error("revised schedule invalid: " +
                                                     violations.front().rule);

                        base.makespan_after = makespan(revised);
                        base.twt_after = total_weighted_tardiness(revised);

                        PairedSchedules paired = pair_schedules(current, revised);
                        MeasureParams mp = cfg.measure_params;
                        mp.instab.t0 = event.t0;
                        for (const std::string& name : cfg.measures) {
                            ReportRow row = base;
                            row.measure = name;
                            MeasureReport m = evaluate_measure(name, paired, mp);
                            row.total = m.total;
                            row.added = m.added_count;
                            row.removed = m.removed_count;
                            row.skipped = m.skipped_count;
                            report.rows.push_back(std::move(row));
                        }
                        if (persist) {
                            auto tag = "step_" + std::to_string(step);
                            save_instance(*ctx.instance, cell_dir / (tag + "_instance.json"));
                            save_schedule(revised, cell_dir / (tag + "_schedule.json"));
                        }
                        current = std::move(revised);
                    } catch (const std::exception& e) {
                        ReportRow row = base;
                        row.error = e.what();
                        report.rows.push_back(std::move(row));
                        break;  // abort this cell, keep the rest of the run
                    }
                }
            }
        }
    }

    if (persist) {
        write_text(cfg.out_dir / "report.csv", report_to_csv(report));
        write_text(cfg.out_dir / "metadata.json", metadata_json(cfg).dump(2) + "\n");
    }
    return report;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string csv =
        "instance,scenario,policy,lambda,step,event_kind,measure,total,added,removed,skipped,"
        "makespan_before,makespan_after,twt_before,twt_after,runtime_ms,error\n";
    for (ReportRow r : report.rows) {
        for (char& c : r.error)
            if (c == ',' || c == '\n') c = ';';
        csv += r.instance + ',' + r.scenario + ',' + r.policy + ',';
        if (r.lambda) csv += format_double(*r.lambda);
        csv += ',' + std::to_string(r.step) + ',' + r.event_kind + ',' + r.measure + ',' +
               format_double(r.total) + ',' + std::to_string(r.added) + ',' +
               std::to_string(r.removed) + ',' + std::to_string(r.skipped) + ',' +
               std::to_string(r.makespan_before) + ',' + std::to_string(r.makespan_after) + ',' +
               format_double(r.twt_before) + ',' + format_double(r.twt_after) + ',' +
               format_double(r.runtime_ms) + ',' + r.error + '\n';
    }
    return csv;
}

}  // namespace shopstab
