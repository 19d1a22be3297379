#include "shopstab/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace shopstab {

std::string to_string(const OpKey& key) {
    return key.job + ":" + std::to_string(key.op);
}

const Job* ProblemInstance::find_job(const std::string& id) const {
    for (const auto& job : jobs)
        if (job.id == id) return &job;
    return nullptr;
}

const Operation* ProblemInstance::find_op(const OpKey& key) const {
    const Job* job = find_job(key.job);
    if (!job) return nullptr;
    if (key.op < 1 || key.op > static_cast<int>(job->operations.size())) return nullptr;
    return &job->operations[static_cast<std::size_t>(key.op - 1)];
}

std::size_t ProblemInstance::op_count() const {
    std::size_t n = 0;
    for (const auto& job : jobs) n += job.operations.size();
    return n;
}

std::vector<const Operation*> ProblemInstance::all_ops() const {
    std::vector<const Operation*> ops;
    ops.reserve(op_count());
    for (const auto& job : jobs)
        for (const auto& op : job.operations) ops.push_back(&op);
    return ops;
}

void ProblemInstance::check() const {
    if (horizon < 1) throw std::invalid_argument("instance horizon must be >= 1");
    std::set<std::string> machine_set(machines.begin(), machines.end());
    if (machine_set.size() != machines.size())
        throw std::invalid_argument("duplicate machine id");
    std::set<std::string> job_ids;
    for (const auto& job : jobs) {
        if (!job_ids.insert(job.id).second)
            throw std::invalid_argument("duplicate job id " + job.id);
        if (job.operations.empty())
            throw std::invalid_argument("job " + job.id + " has no operations");
        if (job.weight <= 0.0)
            throw std::invalid_argument("job " + job.id + " has non-positive weight");
        if (job.due && *job.due < 0)
            throw std::invalid_argument("job " + job.id + " has negative due date");
        int expected = 1;
        for (const auto& op : job.operations) {
            if (op.job != job.id)
                throw std::invalid_argument("operation of job " + job.id + " carries wrong job id");
            if (op.op != expected)
                throw std::invalid_argument("job " + job.id + " operations are not numbered 1..o_j");
            if (op.duration <= 0)
                throw std::invalid_argument("operation " + to_string(op.key()) + " has non-positive duration");
            if (!machine_set.count(op.machine))
                throw std::invalid_argument("operation " + to_string(op.key()) + " uses unknown machine " + op.machine);
            ++expected;
        }
    }
    for (const auto& win : down_windows) {
        if (!machine_set.count(win.machine))
            throw std::invalid_argument("down window on unknown machine " + win.machine);
        if (win.from > win.until)
            throw std::invalid_argument("down window with from > until on " + win.machine);
    }
}

Tick Schedule::start_of(const OpKey& key) const {
    auto it = starts.find(key);
    if (it == starts.end())
        throw std::out_of_range("no start for operation " + to_string(key));
    return it->second;
}

std::vector<Violation> validate(const Schedule& schedule) {
    const ProblemInstance& inst = *schedule.instance;
    std::vector<Violation> out;

    // Coverage: instance ops and schedule keys must match one to one.
    std::set<OpKey> known;
    for (const Operation* op : inst.all_ops()) {
        known.insert(op->key());
        if (!schedule.starts.count(op->key()))
            out.push_back({"missing_start", {op->key()}, "operation has no start time"});
    }
    for (const auto& [key, start] : schedule.starts) {
        if (!known.count(key))
            out.push_back({"unknown_operation", {key}, "start for an operation the instance does not contain"});
        else if (start < 0)
            out.push_back({"negative_start", {key}, "start time is negative"});
    }

    // Precedence within each job.
    for (const auto& job : inst.jobs) {
        for (std::size_t k = 1; k < job.operations.size(); ++k) {
            const Operation& prev = job.operations[k - 1];
            const Operation& next = job.operations[k];
            auto it_prev = schedule.starts.find(prev.key());
            auto it_next = schedule.starts.find(next.key());
            if (it_prev == schedule.starts.end() || it_next == schedule.starts.end()) continue;
            if (it_prev->second + prev.duration > it_next->second)
                out.push_back({"precedence",
                               {prev.key(), next.key()},
                               to_string(prev.key()) + " ends after " + to_string(next.key()) + " starts"});
        }
    }

    // Capacity: per machine, half-open intervals [s, s+p) must be disjoint.
    std::map<std::string, std::vector<const Operation*>> by_machine;
    for (const Operation* op : inst.all_ops())
        if (schedule.starts.count(op->key())) by_machine[op->machine].push_back(op);
    for (auto& [machine, ops] : by_machine) {
        std::sort(ops.begin(), ops.end(), [&](const Operation* a, const Operation* b) {
            Tick sa = schedule.starts.at(a->key()), sb = schedule.starts.at(b->key());
            return sa != sb ? sa < sb : a->key() < b->key();
        });
        for (std::size_t i = 1; i < ops.size(); ++i) {
            const Operation* prev = ops[i - 1];
            const Operation* cur = ops[i];
            if (schedule.starts.at(prev->key()) + prev->duration > schedule.starts.at(cur->key()))
                out.push_back({"capacity",
                               {prev->key(), cur->key()},
                               "overlap on machine " + machine});
        }
    }

    // Machine unavailability.
    for (const auto& win : inst.down_windows) {
        if (win.from == win.until) continue;
        auto it = by_machine.find(win.machine);
        if (it == by_machine.end()) continue;
        for (const Operation* op : it->second) {
            Tick s = schedule.starts.at(op->key());
            if (s < win.until && s + op->duration > win.from)
                out.push_back({"downtime",
                               {op->key()},
                               "scheduled inside down window on " + win.machine});
        }
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Tick makespan(const Schedule& schedule) {
    Tick best = 0;
    for (const Operation* op : schedule.instance->all_ops()) {
        auto it = schedule.starts.find(op->key());
        if (it != schedule.starts.end()) best = std::max(best, it->second + op->duration);
    }
    return best;
}

std::map<std::string, Tick> completion_times(const Schedule& schedule) {
    std::map<std::string, Tick> out;
    for (const auto& job : schedule.instance->jobs) {
        const Operation& last = job.operations.back();
        out[job.id] = schedule.start_of(last.key()) + last.duration;
    }
    return out;
}

double total_weighted_tardiness(const Schedule& schedule) {
    double total = 0.0;
    auto completions = completion_times(schedule);
    for (const auto& job : schedule.instance->jobs) {
        if (!job.due) continue;
        Tick late = completions.at(job.id) - *job.due;
        if (late > 0) total += job.weight * static_cast<double>(late);
    }
    return total;
}

}  // namespace shopstab
