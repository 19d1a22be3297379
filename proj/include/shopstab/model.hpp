#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace shopstab {

// Time is measured in integer ticks. Totals of the difference measures are
// the only place floating point enters.
using Tick = std::int64_t;

// Identifies one processing step: the k-th operation (1-based) of a job.
struct OpKey {
    std::string job;
    int op = 0;

    auto operator<=>(const OpKey&) const = default;
};

std::string to_string(const OpKey& key);

struct Operation {
    std::string job;
    int op = 0;  // 1-based position within the job
    std::string machine;
    Tick duration = 0;

    OpKey key() const { return {job, op}; }
};

struct Job {
    std::string id;
    std::vector<Operation> operations;  // precedence is the list order
    std::optional<Tick> due;
    double weight = 1.0;
};

// Unavailability interval [from, until) of one machine.
struct DownWindow {
    std::string machine;
    Tick from = 0;
    Tick until = 0;
};

struct ProblemInstance {
    std::string name;
    std::vector<std::string> machines;
    std::vector<Job> jobs;
    Tick horizon = 1;  // the planner's horizon T, independent of workload
    std::vector<DownWindow> down_windows;

    const Job* find_job(const std::string& id) const;
    const Operation* find_op(const OpKey& key) const;
    std::size_t op_count() const;
    std::vector<const Operation*> all_ops() const;

    // Structural sanity: non-empty jobs, positive durations, contiguous
    // op numbering, known machines, positive weights. Throws
    // std::invalid_argument on the first problem found.
    void check() const;
};

// A schedule assigns a start tick to every operation of its instance.
// Immutable by convention: repairs build new schedules.
struct Schedule {
    std::shared_ptr<const ProblemInstance> instance;
    std::map<OpKey, Tick> starts;

    Tick start_of(const OpKey& key) const;  // throws if the key is absent
};

struct Violation {
    std::string rule;  // missing_start | unknown_operation | negative_start |
                       // precedence | capacity | downtime
    std::vector<OpKey> ops;
    std::string detail;

    auto operator<=>(const Violation&) const = default;
};

// Feasibility check. Empty result iff every operation has exactly one
// non-negative start, job precedence holds, per-machine intervals
// [s, s+p) are disjoint and no interval overlaps a down window of its
// machine. Violations are data, not failures; the list is canonically
// sorted so it is independent of input order.
std::vector<Violation> validate(const Schedule& schedule);

// Max completion over all operations; 0 for an empty instance.
Tick makespan(const Schedule& schedule);

// Completion of each job's last operation.
std::map<std::string, Tick> completion_times(const Schedule& schedule);

// Sum of weight * max(0, C_j - due_j) over jobs with a due date.
double total_weighted_tardiness(const Schedule& schedule);

}  // namespace shopstab
