#pragma once

#include "shopstab/measures.hpp"
#include "shopstab/model.hpp"

#include <set>

namespace shopstab {

enum class EventKind {
    machine_down,
    new_job,
    rush_job,
    cancel_job,
    due_date_change,
    weight_change,
};

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);

// One disturbance hitting the shop at time t0. Only the fields of the
// active kind are meaningful.
struct RescheduleEvent {
    Tick t0 = 0;
    EventKind kind = EventKind::machine_down;

    std::string machine;  // machine_down
    Tick from = 0;        // machine_down, from >= t0
    Tick until = 0;

    Job job;  // new_job / rush_job

    std::string job_id;            // cancel_job / due_date_change / weight_change
    std::optional<Tick> new_due;   // due_date_change
    double new_weight = 1.0;       // weight_change
};

// Starts that history has fixed: operations begun before t0. No repair
// policy may move them.
struct FrozenPrefix {
    Tick t0 = 0;
    std::map<OpKey, Tick> starts;
    std::set<OpKey> in_progress;  // started before t0, finishing after
};

enum class ConflictReason {
    down_window,    // current interval overlaps the new unavailability
    interrupted,    // was running when its machine failed; repeats in full
    canceled,       // belonged to a canceled job, removed from the instance
    new_arrival,    // has no start yet
    due_date_late,  // its job now completes past the tightened due date
};

std::string to_string(ConflictReason reason);

struct Conflict {
    OpKey key;
    ConflictReason reason = ConflictReason::down_window;

    auto operator<=>(const Conflict&) const = default;
};

// Outcome of applying one event: the revised problem, the untouchable
// past, and the operations a repair policy has to (re)place or look at.
struct ApplyResult {
    std::shared_ptr<const ProblemInstance> instance;
    FrozenPrefix frozen;
    std::vector<Conflict> conflicts;
};

// Applies one disturbance to (instance, schedule) at event.t0. An
// operation that was running when its machine went down is pulled out of
// the frozen prefix: it repeats in full once the machine returns, its
// partial execution discarded. Throws std::invalid_argument for events
// referencing unknown jobs or machines, malformed windows, or duplicate
// job ids.
ApplyResult apply_event(const ProblemInstance& instance, const Schedule& schedule,
                        const RescheduleEvent& event);

enum class DispatchRule { SPT, EDD, FCFS };

std::string to_string(DispatchRule rule);
DispatchRule dispatch_rule_from_string(const std::string& name);

enum class UtilityKind { makespan, weighted_tardiness };

std::string to_string(UtilityKind kind);

struct LocalSearchParams {
    double lambda = 0.5;  // weight on utility; 1 - lambda weighs instability
    UtilityKind utility = UtilityKind::makespan;
    InstabilityConfig instab;  // t0 should match the event being repaired
    long iteration_budget = 1000;
    std::uint64_t seed = 0;
};

struct RepairPolicy {
    enum class Kind { right_shift, regenerate, local_search };
    Kind kind = Kind::right_shift;
    DispatchRule rule = DispatchRule::FCFS;  // regenerate only
    LocalSearchParams ls;                    // local_search only
};

// Minimal-change repair: keeps every machine sequence and job order, only
// delays unstarted operations as far as feasibility requires. Never moves
// a start earlier, so lin_measure(x, x') = 0 and the per-machine sequence
// measure is 0.
Schedule right_shift_repair(const ApplyResult& ctx, const Schedule& x);

// Throws the old plan away: non-delay list scheduling from t0 under the
// given dispatch rule. fcfs_reference supplies the "first come" order
// (an operation's start in the reference schedule); operations unknown to
// the reference queue last. Pass nullptr to fall back to instance order.
Schedule dispatch_regenerate(const ApplyResult& ctx, DispatchRule rule,
                             const Schedule* fcfs_reference);

// First-improvement descent over adjacent swaps in single machine
// sequences, starting from the right-shift repair. Objective:
// lambda * utility(x') + (1 - lambda) * instability(x, x'). Deterministic
// in params.seed. Throws std::invalid_argument for lambda outside [0, 1]
// or a non-positive iteration budget.
Schedule local_search_repair(const ApplyResult& ctx, const Schedule& x,
                             const LocalSearchParams& params);

// Dispatches on policy.kind; x is both the schedule being repaired and the
// reference for FCFS and the instability term.
Schedule repair(const ApplyResult& ctx, const Schedule& x, const RepairPolicy& policy);

// Non-delay FCFS construction of an initial schedule for a pristine
// instance (empty frozen prefix, t0 = 0).
Schedule build_initial_schedule(const std::shared_ptr<const ProblemInstance>& instance);

}  // namespace shopstab
