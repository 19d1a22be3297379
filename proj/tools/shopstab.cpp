// Command line front end: instance/scenario generation, decay-base
// elicitation, schedule comparison, single-timeline simulation, and the
// full experiment matrix.

#include "shopstab/elicitation.hpp"
#include "shopstab/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace {

using namespace shopstab;

FactorMix parse_mix(const std::string& text) {
    FactorMix mix;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        std::string kind = item.substr(0, colon);
        int count = colon == std::string::npos ? 1 : std::stoi(item.substr(colon + 1));
        if (kind == "machine_down") mix.machine_down += count;
        else if (kind == "new_job") mix.new_job += count;
        else if (kind == "rush_job") mix.rush_job += count;
        else if (kind == "cancel_job") mix.cancel_job += count;
        else if (kind == "due_date_change") mix.due_date_change += count;
        else if (kind == "weight_change") mix.weight_change += count;
        else throw CLI::ValidationError("--mix", "unknown event kind '" + kind + "'");
    }
    return mix;
}

std::vector<std::string> parse_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_report(const std::string& name, const MeasureReport& report, bool per_op) {
    std::printf("measure: %s\n", name.c_str());
    std::printf("total: %.17g\n", report.total);
    std::printf("added: %d  removed: %d  skipped: %d\n", report.added_count,
                report.removed_count, report.skipped_count);
    if (per_op && !report.per_op.empty()) {
        std::printf("per-operation contributions:\n");
        for (const auto& [key, value] : report.per_op)
            std::printf("  %-12s %.17g\n", to_string(key).c_str(), value);
    }
}

struct DecayFlags {
    double decay = 1.0;
    double pc = -1.0;
    Tick horizon = 0;
    double dec = -1.0;
    Tick period = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--decay", decay, "decay base I directly (0 < I <= 1)");
        cmd->add_option("--pc", pc, "relative impact at the end of the horizon, in (0,1]");
        cmd->add_option("--horizon", horizon, "planning horizon length T for --pc");
        cmd->add_option("--dec", dec, "impact decrease per period, in [0,1)");
        cmd->add_option("--period", period, "reference period length for --dec");
    }

    double resolve() const {
        if (pc >= 0.0 && horizon > 0) return i_from_horizon({pc, horizon});
        if (dec >= 0.0 && period > 0) return i_from_period({dec, period});
        return decay;
    }
};

int cmd_gen(const GeneratorConfig& gcfg, const std::string& out_path,
            const std::string& schedule_out, const std::string& mix_text,
            std::uint64_t scenario_seed, const std::string& scenario_out, Tick down_lo,
            Tick down_hi) {
    ProblemInstance instance = generate_instance(gcfg);
    save_instance(instance, out_path);
    std::printf("wrote %s (%zu jobs, %zu machines, %zu operations)\n", out_path.c_str(),
                instance.jobs.size(), instance.machines.size(), instance.op_count());
    if (!schedule_out.empty()) {
        auto shared = std::make_shared<const ProblemInstance>(instance);
        Schedule initial = build_initial_schedule(shared);
        save_schedule(initial, schedule_out);
        std::printf("wrote %s (FCFS dispatch, makespan %lld)\n", schedule_out.c_str(),
                    (long long)makespan(initial));
    }
    if (!mix_text.empty()) {
        ScenarioConfig scfg;
        scfg.seed = scenario_seed;
        scfg.mix = parse_mix(mix_text);
        scfg.down_lo = down_lo;
        scfg.down_hi = down_hi;
        GeneratedScenario scenario = generate_scenario(instance, scfg);
        save_events(scenario.events, scenario_out);
        std::printf("wrote %s (%zu events)\n", scenario_out.c_str(), scenario.events.size());
        for (const std::string& warning : scenario.warnings)
            std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    return 0;
}

int cmd_elicit(const DecayFlags& flags) {
    double base = 1.0;
    Tick period = 0, horizon = 0;
    if (flags.pc >= 0.0) {
        base = i_from_horizon({flags.pc, flags.horizon});
        horizon = flags.horizon;
    } else {
        base = i_from_period({flags.dec, flags.period});
        period = flags.period;
    }
    std::printf("I = %.17g\n", base);
    std::printf("impact by distance from the rescheduling moment:\n");
    std::printf("  dist %8d -> %.17g\n", 0, impact(0, base));
    if (period > 0) std::printf("  dist %8lld -> %.17g\n", (long long)period, impact(period, base));
    if (horizon > 0)
        std::printf("  dist %8lld -> %.17g\n", (long long)horizon, impact(horizon, base));
    return 0;
}

int cmd_measure(const std::string& instance_path, const std::string& instance_prime_path,
                const std::string& x_path, const std::string& xp_path, const std::string& name,
                const MeasureParams& params, bool per_op) {
    auto instance = load_instance(instance_path);
    auto instance_prime =
        instance_prime_path.empty() ? instance : load_instance(instance_prime_path);
    Schedule x = load_schedule(x_path, instance);
    Schedule xp = load_schedule(xp_path, instance_prime);

    bool ok = true;
    for (const auto& [label, sched] : {std::pair{"x", &x}, std::pair{"x'", &xp}}) {
        for (const Violation& v : validate(*sched)) {
            std::fprintf(stderr, "%s: %s: %s\n", label, v.rule.c_str(), v.detail.c_str());
            ok = false;
        }
    }
    if (!ok) return 1;

    auto paired = pair_schedules(x, xp);
    print_report(name, evaluate_measure(name, paired, params), per_op);
    if (!paired.machine_changed.empty())
        std::printf("machine reassignments (not scored): %zu\n", paired.machine_changed.size());
    return 0;
}

RepairPolicy make_policy(const std::string& name, double lambda, const std::string& utility,
                         long budget, std::uint64_t seed, double decay, bool include_frozen) {
    RepairPolicy policy;
    if (name == "right_shift") {
        policy.kind = RepairPolicy::Kind::right_shift;
    } else if (name == "local_search") {
        policy.kind = RepairPolicy::Kind::local_search;
        policy.ls.lambda = lambda;
        policy.ls.utility =
            utility == "twt" ? UtilityKind::weighted_tardiness : UtilityKind::makespan;
        policy.ls.iteration_budget = budget;
        policy.ls.seed = seed;
        policy.ls.instab.decay = decay;
        policy.ls.instab.include_frozen = include_frozen;
    } else {
        policy.kind = RepairPolicy::Kind::regenerate;
        policy.rule = dispatch_rule_from_string(name);
    }
    return policy;
}

int cmd_simulate(const std::string& instance_path, const std::string& schedule_path,
                 const std::string& events_path, const std::string& policy_name, double lambda,
                 const std::string& utility, long budget, std::uint64_t seed,
                 const std::vector<std::string>& measures, const MeasureParams& base_params,
                 const std::filesystem::path& out_dir, bool per_op) {
    auto instance = load_instance(instance_path);
    Schedule current = load_schedule(schedule_path, instance);
    auto violations = validate(current);
    if (!violations.empty()) {
        for (const Violation& v : violations)
            std::fprintf(stderr, "schedule: %s: %s\n", v.rule.c_str(), v.detail.c_str());
        return 1;
    }
    auto events = load_events(events_path);
    std::filesystem::create_directories(out_dir);

    RepairPolicy policy = make_policy(policy_name, lambda, utility, budget, seed,
                                      base_params.instab.decay,
                                      base_params.instab.include_frozen);
    int step = 0;
    for (const RescheduleEvent& event : events) {
        ++step;
        std::printf("== step %d: %s at t0=%lld ==\n", step, to_string(event.kind).c_str(),
                    (long long)event.t0);
        ApplyResult ctx = apply_event(*current.instance, current, event);
        policy.ls.instab.t0 = event.t0;
        Schedule revised = repair(ctx, current, policy);
        auto bad = validate(revised);
        if (!bad.empty()) {
            std::fprintf(stderr, "revised schedule invalid (%s)\n", bad.front().rule.c_str());
            return 1;
        }
        std::printf("conflicts: %zu, frozen: %zu\n", ctx.conflicts.size(),
                    ctx.frozen.starts.size());
        std::printf("makespan %lld -> %lld, weighted tardiness %.17g -> %.17g\n",
                    (long long)makespan(current), (long long)makespan(revised),
                    total_weighted_tardiness(current), total_weighted_tardiness(revised));
        auto paired = pair_schedules(current, revised);
        MeasureParams params = base_params;
        params.instab.t0 = event.t0;
        for (const std::string& name : measures)
            print_report(name, evaluate_measure(name, paired, params), per_op);

        auto tag = "step_" + std::to_string(step);
        save_instance(*ctx.instance, out_dir / (tag + "_instance.json"));
        save_schedule(revised, out_dir / (tag + "_schedule.json"));
        current = std::move(revised);
    }
    save_schedule(current, out_dir / "revised_schedule.json");
    save_instance(*current.instance, out_dir / "revised_instance.json");
    std::printf("wrote %s\n", (out_dir / "revised_schedule.json").c_str());
    return 0;
}

int cmd_experiment(int n_instances, int jobs, int machines, std::uint64_t instance_seed,
                   Tick dur_lo, Tick dur_hi, double tightness, int n_scenarios,
                   std::uint64_t scenario_seed, const std::string& mix_text, Tick down_lo,
                   Tick down_hi, const std::vector<std::string>& policy_names,
                   const std::vector<double>& lambdas, const std::string& utility, long budget,
                   std::uint64_t ls_seed, std::vector<std::string> measures,
                   const MeasureParams& params, const std::filesystem::path& out_dir) {
    ExperimentConfig cfg;
    for (int i = 0; i < n_instances; ++i) {
        GeneratorConfig g;
        g.n_jobs = jobs;
        g.n_machines = machines;
        g.duration_lo = dur_lo;
        g.duration_hi = dur_hi;
        g.tightness = tightness;
        g.seed = instance_seed + static_cast<std::uint64_t>(i);
        cfg.instances.push_back(g);
    }
    for (int i = 0; i < n_scenarios; ++i) {
        ScenarioConfig s;
        s.seed = scenario_seed + static_cast<std::uint64_t>(i);
        s.mix = parse_mix(mix_text);
        s.down_lo = down_lo;
        s.down_hi = down_hi;
        cfg.scenarios.push_back(s);
    }
    for (const std::string& name : policy_names) {
        if (name == "local_search") {
            for (double lambda : lambdas) {
                char label[32];
                std::snprintf(label, sizeof(label), "ls_l%.2f", lambda);
                cfg.policies.push_back({label, make_policy(name, lambda, utility, budget, ls_seed,
                                                           params.instab.decay,
                                                           params.instab.include_frozen)});
            }
        } else {
            cfg.policies.push_back({name, make_policy(name, 0.5, utility, budget, ls_seed,
                                                      params.instab.decay,
                                                      params.instab.include_frozen)});
        }
    }
    if (measures.size() == 1 && measures[0] == "all") measures = known_measures();
    cfg.measures = measures;
    cfg.measure_params = params;
    cfg.out_dir = out_dir;

    ExperimentReport report = run_experiment(cfg);
    for (const std::string& warning : report.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    int failures = 0;
    for (const ReportRow& row : report.rows)
        if (!row.error.empty()) ++failures;
    std::printf("%zu rows (%d failed cells) -> %s\n", report.rows.size(), failures,
                (out_dir / "report.csv").c_str());
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schedule stability toolkit for dynamic job shops"};
    app.require_subcommand(1);

    std::string default_out = ".";
    if (const char* env = std::getenv("SHOPSTAB_OUT")) default_out = env;

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance (and optionally a scenario)");
    GeneratorConfig gcfg;
    std::string gen_out = "instance.json", gen_schedule_out, gen_mix,
                gen_scenario_out = "events.json";
    std::uint64_t gen_scenario_seed = 0;
    Tick gen_down_lo = 5, gen_down_hi = 20;
    gen->add_option("--jobs", gcfg.n_jobs, "number of jobs")->default_val(6);
    gen->add_option("--machines", gcfg.n_machines, "number of machines")->default_val(6);
    gen->add_option("--seed", gcfg.seed, "generator seed")->default_val(0);
    gen->add_option("--dur-lo", gcfg.duration_lo, "minimum duration")->default_val(1);
    gen->add_option("--dur-hi", gcfg.duration_hi, "maximum duration")->default_val(9);
    gen->add_option("--tightness", gcfg.tightness, "due date tightness factor")->default_val(1.5);
    gen->add_option("--name", gcfg.name, "instance name (defaults to shape+seed)");
    gen->add_option("--out", gen_out, "instance output file")->default_val("instance.json");
    gen->add_option("--schedule-out", gen_schedule_out,
                    "also write the initial FCFS dispatch schedule");
    gen->add_option("--mix", gen_mix,
                    "also generate a scenario, e.g. machine_down:1,new_job:2");
    gen->add_option("--scenario-seed", gen_scenario_seed, "scenario seed")->default_val(0);
    gen->add_option("--scenario-out", gen_scenario_out, "scenario output file")
        ->default_val("events.json");
    gen->add_option("--down-lo", gen_down_lo, "minimum breakdown length")->default_val(5);
    gen->add_option("--down-hi", gen_down_hi, "maximum breakdown length")->default_val(20);

    // elicit
    auto* elicit = app.add_subcommand("elicit", "compute the decay base I from a statement");
    DecayFlags elicit_flags;
    elicit->add_option("--pc", elicit_flags.pc, "impact at the end of the horizon, in (0,1]");
    elicit->add_option("--horizon", elicit_flags.horizon, "planning horizon length T");
    elicit->add_option("--dec", elicit_flags.dec, "impact decrease per period, in [0,1)");
    elicit->add_option("--period", elicit_flags.period, "reference period length");

    // measure
    auto* measure = app.add_subcommand("measure", "compare two schedules with one measure");
    std::string m_instance, m_instance_prime, m_x, m_xp, m_name = "instability";
    MeasureParams m_params;
    DecayFlags m_decay;
    bool m_per_op = false, m_include_frozen = false;
    Tick m_t0 = 0;
    measure->add_option("--instance", m_instance, "instance of x")->required();
    measure->add_option("--instance-prime", m_instance_prime,
                        "instance of x' when it differs (revised instance)");
    measure->add_option("--x", m_x, "initial schedule file")->required();
    measure->add_option("--x-prime", m_xp, "revised schedule file")->required();
    measure->add_option("--measure", m_name, "wu|lin|combined|job_level|sequence|sequence_machine|instability")
        ->default_val("instability");
    measure->add_option("--t0", m_t0, "rescheduling moment")->default_val(0);
    measure->add_flag("--include-frozen", m_include_frozen,
                      "score pairs whose min(s,s') lies before t0");
    measure->add_option("--w-early", m_params.w_early, "combined: weight on earlier starts");
    measure->add_option("--w-late", m_params.w_late, "combined: weight on later starts");
    measure->add_option("--g-start", m_params.g_start, "job_level: weight on job starts");
    measure->add_option("--g-completion", m_params.g_completion,
                        "job_level: weight on job completions");
    measure->add_flag("--per-op", m_per_op, "print per-operation contributions");
    m_decay.add(measure);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "apply an event file and repair step by step");
    std::string s_instance, s_schedule, s_events, s_policy = "right_shift",
                s_utility = "makespan", s_measures = "wu,lin,sequence_machine,instability";
    std::string s_out = default_out;
    double s_lambda = 0.5;
    long s_budget = 1000;
    std::uint64_t s_seed = 0;
    bool s_per_op = false, s_include_frozen = false;
    DecayFlags s_decay;
    simulate->add_option("--instance", s_instance, "instance file")->required();
    simulate->add_option("--schedule", s_schedule, "initial schedule file")->required();
    simulate->add_option("--events", s_events, "event file, ordered by t0")->required();
    simulate->add_option("--policy", s_policy, "right_shift|spt|edd|fcfs|local_search")
        ->default_val("right_shift");
    simulate->add_option("--lambda", s_lambda, "local search: weight on utility")->default_val(0.5);
    simulate->add_option("--utility", s_utility, "local search: makespan|twt")
        ->default_val("makespan");
    simulate->add_option("--budget", s_budget, "local search: iteration budget")->default_val(1000);
    simulate->add_option("--ls-seed", s_seed, "local search: seed")->default_val(0);
    simulate->add_option("--measures", s_measures, "comma separated measure list");
    simulate->add_flag("--include-frozen", s_include_frozen,
                       "score pairs whose min(s,s') lies before t0");
    simulate->add_flag("--per-op", s_per_op, "print per-operation contributions");
    simulate->add_option("--out-dir", s_out, "where to write revised files (env SHOPSTAB_OUT)")
        ->default_val(default_out);
    s_decay.add(simulate);

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run the full comparison matrix");
    int e_instances = 3, e_jobs = 6, e_machines = 6, e_scenarios = 5;
    std::uint64_t e_instance_seed = 0, e_scenario_seed = 1000, e_ls_seed = 0;
    Tick e_dur_lo = 1, e_dur_hi = 9, e_down_lo = 5, e_down_hi = 20;
    double e_tightness = 1.5;
    std::string e_mix = "machine_down:1", e_policies = "right_shift,spt,edd,fcfs,local_search";
    std::string e_lambdas = "0,0.25,0.5,0.75,1", e_utility = "makespan", e_measures = "all";
    std::string e_out = default_out;
    long e_budget = 1000;
    bool e_include_frozen = false;
    DecayFlags e_decay;
    experiment->add_option("--instances", e_instances, "number of instances")->default_val(3);
    experiment->add_option("--jobs", e_jobs, "jobs per instance")->default_val(6);
    experiment->add_option("--machines", e_machines, "machines per instance")->default_val(6);
    experiment->add_option("--instance-seed", e_instance_seed, "first instance seed")
        ->default_val(0);
    experiment->add_option("--dur-lo", e_dur_lo, "minimum duration")->default_val(1);
    experiment->add_option("--dur-hi", e_dur_hi, "maximum duration")->default_val(9);
    experiment->add_option("--tightness", e_tightness, "due date tightness")->default_val(1.5);
    experiment->add_option("--scenarios", e_scenarios, "scenarios per instance")->default_val(5);
    experiment->add_option("--scenario-seed", e_scenario_seed, "first scenario seed")
        ->default_val(1000);
    experiment->add_option("--mix", e_mix, "event mix per scenario")
        ->default_val("machine_down:1");
    experiment->add_option("--down-lo", e_down_lo, "minimum breakdown length")->default_val(5);
    experiment->add_option("--down-hi", e_down_hi, "maximum breakdown length")->default_val(20);
    experiment->add_option("--policies", e_policies, "comma separated policy list");
    experiment->add_option("--lambdas", e_lambdas, "lambda sweep for local_search");
    experiment->add_option("--utility", e_utility, "local search utility: makespan|twt");
    experiment->add_option("--budget", e_budget, "local search iteration budget")
        ->default_val(1000);
    experiment->add_option("--ls-seed", e_ls_seed, "local search seed")->default_val(0);
    experiment->add_option("--measures", e_measures, "measure list or 'all'")->default_val("all");
    experiment->add_flag("--include-frozen", e_include_frozen,
                         "score pairs whose min(s,s') lies before t0");
    experiment->add_option("--out-dir", e_out, "output directory (env SHOPSTAB_OUT)")
        ->default_val(default_out);
    e_decay.add(experiment);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gcfg, gen_out, gen_schedule_out, gen_mix, gen_scenario_seed,
                           gen_scenario_out, gen_down_lo, gen_down_hi);
        if (elicit->parsed()) {
            if (elicit_flags.pc < 0.0 && elicit_flags.dec < 0.0)
                throw std::invalid_argument("elicit needs --pc/--horizon or --dec/--period");
            return cmd_elicit(elicit_flags);
        }
        if (measure->parsed()) {
            m_params.instab.decay = m_decay.resolve();
            m_params.instab.t0 = m_t0;
            m_params.instab.include_frozen = m_include_frozen;
            return cmd_measure(m_instance, m_instance_prime, m_x, m_xp, m_name, m_params,
                               m_per_op);
        }
        if (simulate->parsed()) {
            MeasureParams params;
            params.instab.decay = s_decay.resolve();
            params.instab.include_frozen = s_include_frozen;
            return cmd_simulate(s_instance, s_schedule, s_events, s_policy, s_lambda, s_utility,
                                s_budget, s_seed, parse_list(s_measures), params, s_out, s_per_op);
        }
        if (experiment->parsed()) {
            MeasureParams params;
            params.instab.decay = e_decay.resolve();
            params.instab.include_frozen = e_include_frozen;
            std::vector<double> lambdas;
            for (const std::string& token : parse_list(e_lambdas))
                lambdas.push_back(std::stod(token));
            return cmd_experiment(e_instances, e_jobs, e_machines, e_instance_seed, e_dur_lo,
                                  e_dur_hi, e_tightness, e_scenarios, e_scenario_seed, e_mix,
                                  e_down_lo, e_down_hi, parse_list(e_policies), lambdas,
                                  e_utility, e_budget, e_ls_seed, parse_list(e_measures), params,
                                  e_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
