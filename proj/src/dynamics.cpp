#include "shopstab/dynamics.hpp"

#include "shopstab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace shopstab {

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::machine_down: return "machine_down";
        case EventKind::new_job: return "new_job";
        case EventKind::rush_job: return "rush_job";
        case EventKind::cancel_job: return "cancel_job";
        case EventKind::due_date_change: return "due_date_change";
        case EventKind::weight_change: return "weight_change";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& name) {
    if (name == "machine_down") return EventKind::machine_down;
    if (name == "new_job") return EventKind::new_job;
    if (name == "rush_job") return EventKind::rush_job;
    if (name == "cancel_job") return EventKind::cancel_job;
    if (name == "due_date_change") return EventKind::due_date_change;
    if (name == "weight_change") return EventKind::weight_change;
    throw std::invalid_argument("unknown event kind: " + name);
}

std::string to_string(ConflictReason reason) {
    switch (reason) {
        case ConflictReason::down_window: return "down_window";
        case ConflictReason::interrupted: return "interrupted";
        case ConflictReason::canceled: return "canceled";
        case ConflictReason::new_arrival: return "new_arrival";
        case ConflictReason::due_date_late: return "due_date_late";
    }
    return "?";
}

std::string to_string(DispatchRule rule) {
    switch (rule) {
        case DispatchRule::SPT: return "spt";
        case DispatchRule::EDD: return "edd";
        case DispatchRule::FCFS: return "fcfs";
    }
    return "?";
}

DispatchRule dispatch_rule_from_string(const std::string& name) {
    if (name == "spt" || name == "SPT") return DispatchRule::SPT;
    if (name == "edd" || name == "EDD") return DispatchRule::EDD;
    if (name == "fcfs" || name == "FCFS") return DispatchRule::FCFS;
    throw std::invalid_argument("unknown dispatch rule: " + name);
}

std::string to_string(UtilityKind kind) {
    return kind == UtilityKind::makespan ? "makespan" : "weighted_tardiness";
}

namespace {

constexpr Tick kInf = std::numeric_limits<Tick>::max() / 4;

bool overlaps(Tick s, Tick dur, Tick from, Tick until) {
    return s < until && s + dur > from;
}

// Earliest start >= cand at which [start, start + dur) avoids every window.
Tick fit_outside_windows(Tick cand, Tick dur, const std::vector<DownWindow>& windows) {
    bool moved = true;
    while (moved) {
        moved = false;
        for (const DownWindow& w : windows) {
            if (w.from == w.until) continue;
            if (overlaps(cand, dur, w.from, w.until)) {
                cand = w.until;
                moved = true;
            }
        }
    }
    return cand;
}

std::map<std::string, std::vector<DownWindow>> windows_by_machine(const ProblemInstance& inst) {
    std::map<std::string, std::vector<DownWindow>> out;
    for (const DownWindow& w : inst.down_windows) out[w.machine].push_back(w);
    for (auto& [machine, wins] : out)
        std::sort(wins.begin(), wins.end(),
                  [](const DownWindow& a, const DownWindow& b) { return a.from < b.from; });
    return out;
}

// Machines stay blocked until t0 and until their frozen work clears.
std::map<std::string, Tick> machine_ready_times(const ProblemInstance& inst,
                                                const FrozenPrefix& frozen) {
    std::map<std::string, Tick> ready;
    for (const std::string& m : inst.machines) ready[m] = frozen.t0;
    for (const auto& [key, start] : frozen.starts) {
        const Operation* op = inst.find_op(key);
        if (!op) continue;
        ready[op->machine] = std::max(ready[op->machine], start + op->duration);
    }
    return ready;
}

// Semi-active timing of the movable operations under fixed machine
// sequences. Returns nothing when the sequences and the job orders form a
// cycle. floor_starts, when given, adds per-operation lower bounds (used
// by the right shift to forbid earlier starts).
std::optional<std::map<OpKey, Tick>> propagate_starts(
    const ApplyResult& ctx, const std::map<std::string, std::vector<OpKey>>& sequences,
    const std::map<OpKey, Tick>* floor_starts) {
    const ProblemInstance& inst = *ctx.instance;
    const FrozenPrefix& frozen = ctx.frozen;

    std::vector<const Operation*> ops;
    std::map<OpKey, int> index;
    for (const Operation* op : inst.all_ops()) {
        if (frozen.starts.count(op->key())) continue;
        index[op->key()] = static_cast<int>(ops.size());
        ops.push_back(op);
    }
    const int n = static_cast<int>(ops.size());

    auto windows = windows_by_machine(inst);
    auto machine_ready = machine_ready_times(inst, frozen);

    std::vector<std::vector<int>> succs(n);
    std::vector<int> indegree(n, 0);
    std::vector<Tick> lower(n, frozen.t0);

    for (int i = 0; i < n; ++i) {
        const Operation* op = ops[i];
        lower[i] = std::max(lower[i], machine_ready.at(op->machine));
        if (floor_starts) {
            auto it = floor_starts->find(op->key());
            if (it != floor_starts->end()) lower[i] = std::max(lower[i], it->second);
        }
        if (op->op > 1) {
            OpKey pred{op->job, op->op - 1};
            auto fit = frozen.starts.find(pred);
            if (fit != frozen.starts.end()) {
                lower[i] = std::max(lower[i], fit->second + inst.find_op(pred)->duration);
            } else {
                auto pit = index.find(pred);
                if (pit == index.end())
                    throw std::logic_error("job predecessor of " + to_string(op->key()) +
                                           " is neither frozen nor movable");
                succs[pit->second].push_back(i);
                ++indegree[i];
            }
        }
    }
    for (const auto& [machine, seq] : sequences) {
        for (std::size_t k = 1; k < seq.size(); ++k) {
            succs[index.at(seq[k - 1])].push_back(index.at(seq[k]));
            ++indegree[index.at(seq[k])];
        }
    }

    std::vector<Tick> start(n, 0), finish(n, 0);
    std::deque<int> queue;
    for (int i = 0; i < n; ++i)
        if (indegree[i] == 0) queue.push_back(i);
    int done = 0;
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        const Operation* op = ops[i];
        auto wit = windows.find(op->machine);
        start[i] = wit == windows.end()
                       ? lower[i]
                       : fit_outside_windows(lower[i], op->duration, wit->second);
        finish[i] = start[i] + op->duration;
        ++done;
        for (int s : succs[i]) {
            lower[s] = std::max(lower[s], finish[i]);
            if (--indegree[s] == 0) queue.push_back(s);
        }
    }
    if (done < n) return std::nullopt;  // cycle

    std::map<OpKey, Tick> out;
    for (int i = 0; i < n; ++i) out[ops[i]->key()] = start[i];
    return out;
}

// Movable operations of each machine in the start order of `reference`;
// operations absent from the reference (new arrivals) queue at the tail in
// key order.
std::map<std::string, std::vector<OpKey>> sequences_from_schedule(const ApplyResult& ctx,
                                                                  const Schedule& reference) {
    struct Entry {
        Tick start;
        OpKey key;
    };
    std::map<std::string, std::vector<Entry>> rows;
    for (const Operation* op : ctx.instance->all_ops()) {
        if (ctx.frozen.starts.count(op->key())) continue;
        auto it = reference.starts.find(op->key());
        rows[op->machine].push_back({it == reference.starts.end() ? kInf : it->second, op->key()});
    }
    std::map<std::string, std::vector<OpKey>> out;
    for (auto& [machine, row] : rows) {
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) {
            return a.start != b.start ? a.start < b.start : a.key < b.key;
        });
        auto& seq = out[machine];
        seq.reserve(row.size());
        for (const Entry& e : row) seq.push_back(e.key);
    }
    return out;
}

Schedule assemble(const ApplyResult& ctx, std::map<OpKey, Tick> movable_starts) {
    Schedule out;
    out.instance = ctx.instance;
    out.starts = std::move(movable_starts);
    for (const auto& [key, start] : ctx.frozen.starts) out.starts[key] = start;
    return out;
}

double utility_value(const Schedule& schedule, UtilityKind kind) {
    return kind == UtilityKind::makespan ? static_cast<double>(makespan(schedule))
                                         : total_weighted_tardiness(schedule);
}

}  // namespace

ApplyResult apply_event(const ProblemInstance& instance, const Schedule& schedule,
                        const RescheduleEvent& event) {
    if (event.t0 < 0 || event.t0 > instance.horizon)
        throw std::invalid_argument("event time outside [0, horizon]");

    auto revised = std::make_shared<ProblemInstance>(instance);
    std::vector<Conflict> conflicts;

    switch (event.kind) {
        case EventKind::machine_down: {
            if (std::find(revised->machines.begin(), revised->machines.end(), event.machine) ==
                revised->machines.end())
                throw std::invalid_argument("machine_down on unknown machine " + event.machine);
            if (event.from < event.t0 || event.from > event.until)
                throw std::invalid_argument("machine_down window must satisfy t0 <= from <= until");
            revised->down_windows.push_back({event.machine, event.from, event.until});
            break;
        }
        case EventKind::new_job:
        case EventKind::rush_job: {
            if (revised->find_job(event.job.id))
                throw std::invalid_argument("arriving job reuses id " + event.job.id);
            Job job = event.job;
            if (event.kind == EventKind::rush_job) {
                double top = 0.0;
                for (const Job& j : revised->jobs) top = std::max(top, j.weight);
                // A rush order outranks everything already on the floor.
                job.weight = std::max(job.weight, top + 1.0);
            }
            for (const Operation& op : job.operations)
                conflicts.push_back({op.key(), ConflictReason::new_arrival});
            revised->jobs.push_back(std::move(job));
            break;
        }
        case EventKind::cancel_job: {
            auto it = std::find_if(revised->jobs.begin(), revised->jobs.end(),
                                   [&](const Job& j) { return j.id == event.job_id; });
            if (it == revised->jobs.end())
                throw std::invalid_argument("cancel_job for unknown job " + event.job_id);
            // Started operations are history and stay; the rest disappear.
            std::size_t keep = 0;
            while (keep < it->operations.size() &&
                   schedule.start_of(it->operations[keep].key()) < event.t0)
                ++keep;
            for (std::size_t k = keep; k < it->operations.size(); ++k)
                conflicts.push_back({it->operations[k].key(), ConflictReason::canceled});
            if (keep == 0)
                revised->jobs.erase(it);
            else
                it->operations.resize(keep);
            break;
        }
        case EventKind::due_date_change: {
            auto it = std::find_if(revised->jobs.begin(), revised->jobs.end(),
                                   [&](const Job& j) { return j.id == event.job_id; });
            if (it == revised->jobs.end())
                throw std::invalid_argument("due_date_change for unknown job " + event.job_id);
            if (!event.new_due || *event.new_due < 0)
                throw std::invalid_argument("due_date_change needs a non-negative due date");
            it->due = event.new_due;
            const Operation& last = it->operations.back();
            Tick completion = schedule.start_of(last.key()) + last.duration;
            if (completion > *event.new_due) {
                for (const Operation& op : it->operations)
                    if (schedule.start_of(op.key()) >= event.t0)
                        conflicts.push_back({op.key(), ConflictReason::due_date_late});
            }
            break;
        }
        case EventKind::weight_change: {
            auto it = std::find_if(revised->jobs.begin(), revised->jobs.end(),
                                   [&](const Job& j) { return j.id == event.job_id; });
            if (it == revised->jobs.end())
                throw std::invalid_argument("weight_change for unknown job " + event.job_id);
            if (event.new_weight <= 0.0)
                throw std::invalid_argument("weight_change needs a positive weight");
            it->weight = event.new_weight;
            break;
        }
    }
    revised->check();

    FrozenPrefix frozen;
    frozen.t0 = event.t0;
    for (const Operation* op : revised->all_ops()) {
        auto it = schedule.starts.find(op->key());
        if (it == schedule.starts.end() || it->second >= event.t0) continue;
        if (event.kind == EventKind::machine_down && op->machine == event.machine &&
            overlaps(it->second, op->duration, event.from, event.until)) {
            // Running when the machine failed: repeats in full later.
            conflicts.push_back({op->key(), ConflictReason::interrupted});
            continue;
        }
        frozen.starts[op->key()] = it->second;
        if (it->second + op->duration > event.t0) frozen.in_progress.insert(op->key());
    }

    if (event.kind == EventKind::machine_down) {
        for (const Operation* op : revised->all_ops()) {
            if (op->machine != event.machine) continue;
            auto it = schedule.starts.find(op->key());
            if (it == schedule.starts.end() || it->second < event.t0) continue;
            if (overlaps(it->second, op->duration, event.from, event.until))
                conflicts.push_back({op->key(), ConflictReason::down_window});
        }
    }

    std::sort(conflicts.begin(), conflicts.end());
    conflicts.erase(std::unique(conflicts.begin(), conflicts.end()), conflicts.end());
    return {std::move(revised), std::move(frozen), std::move(conflicts)};
}

Schedule right_shift_repair(const ApplyResult& ctx, const Schedule& x) {
    auto sequences = sequences_from_schedule(ctx, x);
    std::map<OpKey, Tick> floors;
    for (const Operation* op : ctx.instance->all_ops()) {
        if (ctx.frozen.starts.count(op->key())) continue;
        auto it = x.starts.find(op->key());
        if (it != x.starts.end()) floors[op->key()] = it->second;
    }
    auto starts = propagate_starts(ctx, sequences, &floors);
    if (!starts)
        throw std::logic_error("right shift hit a cycle; the reference schedule was not valid");
    return assemble(ctx, std::move(*starts));
}

Schedule dispatch_regenerate(const ApplyResult& ctx, DispatchRule rule,
                             const Schedule* fcfs_reference) {
    const ProblemInstance& inst = *ctx.instance;
    auto windows = windows_by_machine(inst);
    auto machine_free = machine_ready_times(inst, ctx.frozen);

    // Arrival order for FCFS when no reference schedule exists: position in
    // the instance's job list.
    std::map<std::string, Tick> arrival;
    for (std::size_t j = 0; j < inst.jobs.size(); ++j)
        arrival[inst.jobs[j].id] = static_cast<Tick>(j);

    struct Pending {
        const Job* job;
        std::size_t next;  // first unscheduled operation index
        Tick ready;        // when that operation may start
    };
    std::vector<Pending> pendings;
    for (const Job& job : inst.jobs) {
        std::size_t next = 0;
        Tick ready = ctx.frozen.t0;
        while (next < job.operations.size() &&
               ctx.frozen.starts.count(job.operations[next].key())) {
            ready = std::max(ready, ctx.frozen.starts.at(job.operations[next].key()) +
                                        job.operations[next].duration);
            ++next;
        }
        if (next < job.operations.size()) pendings.push_back({&job, next, ready});
    }

    auto rule_key = [&](const Operation& op, const Job& job) -> Tick {
        switch (rule) {
            case DispatchRule::SPT: return op.duration;
            case DispatchRule::EDD: return job.due ? *job.due : kInf;
            case DispatchRule::FCFS: {
                if (!fcfs_reference) return arrival.at(job.id);
                auto it = fcfs_reference->starts.find(op.key());
                return it == fcfs_reference->starts.end() ? kInf : it->second;
            }
        }
        return 0;
    };

    std::map<OpKey, Tick> placed;
    while (!pendings.empty()) {
        // Earliest feasible start over every pending head operation.
        Tick best_t = kInf;
        std::string best_machine;
        for (const Pending& p : pendings) {
            const Operation& op = p.job->operations[p.next];
            Tick cand = std::max(p.ready, machine_free.at(op.machine));
            auto wit = windows.find(op.machine);
            if (wit != windows.end()) cand = fit_outside_windows(cand, op.duration, wit->second);
            if (cand < best_t || (cand == best_t && op.machine < best_machine)) {
                best_t = cand;
                best_machine = op.machine;
            }
        }
        // Among operations startable right then on that machine, the rule picks.
        std::size_t chosen = pendings.size();
        Tick chosen_key = 0;
        for (std::size_t i = 0; i < pendings.size(); ++i) {
            const Pending& p = pendings[i];
            const Operation& op = p.job->operations[p.next];
            if (op.machine != best_machine) continue;
            Tick cand = std::max(p.ready, machine_free.at(op.machine));
            auto wit = windows.find(op.machine);
            if (wit != windows.end()) cand = fit_outside_windows(cand, op.duration, wit->second);
            if (cand != best_t) continue;
            Tick key = rule_key(op, *p.job);
            if (chosen == pendings.size() || key < chosen_key ||
                (key == chosen_key && op.key() < pendings[chosen].job->operations[pendings[chosen].next].key())) {
                chosen = i;
                chosen_key = key;
            }
        }
        Pending& p = pendings[chosen];
        const Operation& op = p.job->operations[p.next];
        placed[op.key()] = best_t;
        machine_free[op.machine] = best_t + op.duration;
        p.ready = best_t + op.duration;
        ++p.next;
        if (p.next == p.job->operations.size())
            pendings.erase(pendings.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    return assemble(ctx, std::move(placed));
}

// First-improvement descent over adjacent swaps, iterated: once a descent
// stalls in a local optimum, the remaining budget is spent on seeded kicks
// (a few random swaps away from the best sequences found) followed by
// another descent. The best-found schedule is returned; it can only
// improve on the right-shift start.
Schedule local_search_repair(const ApplyResult& ctx, const Schedule& x,
                             const LocalSearchParams& params) {
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw std::invalid_argument("lambda must lie in [0, 1]");
    if (params.iteration_budget < 1)
        throw std::invalid_argument("iteration budget must be >= 1");

    auto objective = [&](const Schedule& cand) {
        double util = params.lambda == 0.0 ? 0.0 : utility_value(cand, params.utility);
        double instab = params.lambda == 1.0
                            ? 0.0
                            : instability(pair_schedules(x, cand), params.instab).total;
        return params.lambda * util + (1.0 - params.lambda) * instab;
    };

    Schedule best_schedule = right_shift_repair(ctx, x);
    double best = objective(best_schedule);
    auto sequences = sequences_from_schedule(ctx, best_schedule);
    auto best_sequences = sequences;
    double current = best;

    struct Move {
        std::string machine;
        std::size_t pos;
    };
    std::vector<Move> moves;
    for (const auto& [machine, seq] : sequences)
        for (std::size_t pos = 0; pos + 1 < seq.size(); ++pos) moves.push_back({machine, pos});
    if (moves.empty()) return best_schedule;

    Rng rng(params.seed);
    long iterations = 0;
    while (iterations < params.iteration_budget) {
        // One descent pass; accepting a swap restarts the pass.
        bool improved = false;
        rng.shuffle(moves);
        for (const Move& mv : moves) {
            if (iterations >= params.iteration_budget) return best_schedule;
            auto& seq = sequences.at(mv.machine);
            std::swap(seq[mv.pos], seq[mv.pos + 1]);
            ++iterations;
            auto starts = propagate_starts(ctx, sequences, nullptr);
            bool accepted = false;
            if (starts) {  // a swap may create a precedence cycle; skip those
                Schedule cand = assemble(ctx, std::move(*starts));
                double obj = objective(cand);
                if (obj < current) {
                    current = obj;
                    accepted = true;
                    if (obj < best) {
                        best = obj;
                        best_schedule = std::move(cand);
                        best_sequences = sequences;
                    }
                }
            }
            if (accepted) {
                improved = true;
                break;
            }
            std::swap(seq[mv.pos], seq[mv.pos + 1]);
        }
        if (improved) continue;

        // Local optimum: kick a few swaps away from the best sequences.
        if (iterations >= params.iteration_budget) break;
        sequences = best_sequences;
        for (int k = 0; k < 3; ++k) {
            const Move& mv = moves[static_cast<std::size_t>(
                rng.uniform(0, static_cast<Tick>(moves.size()) - 1))];
            auto& seq = sequences.at(mv.machine);
            std::swap(seq[mv.pos], seq[mv.pos + 1]);
        }
        ++iterations;
        auto starts = propagate_starts(ctx, sequences, nullptr);
        if (!starts) {  // infeasible kick: fall back and try again next round
            sequences = best_sequences;
            current = best;
            continue;
        }
        Schedule kicked = assemble(ctx, std::move(*starts));
        current = objective(kicked);
        if (current < best) {
            best = current;
            best_schedule = std::move(kicked);
            best_sequences = sequences;
        }
    }
    return best_schedule;
}

Schedule repair(const ApplyResult& ctx, const Schedule& x, const RepairPolicy& policy) {
    switch (policy.kind) {
        case RepairPolicy::Kind::right_shift: return right_shift_repair(ctx, x);
        case RepairPolicy::Kind::regenerate: return dispatch_regenerate(ctx, policy.rule, &x);
        case RepairPolicy::Kind::local_search: return local_search_repair(ctx, x, policy.ls);
    }
    throw std::logic_error("unhandled repair policy");
}

Schedule build_initial_schedule(const std::shared_ptr<const ProblemInstance>& instance) {
    ApplyResult ctx;
    ctx.instance = instance;
    ctx.frozen.t0 = 0;
    return dispatch_regenerate(ctx, DispatchRule::FCFS, nullptr);
}

}  // namespace shopstab
