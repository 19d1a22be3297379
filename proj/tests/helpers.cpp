#include "helpers.hpp"

#include <algorithm>
#include <stdexcept>

namespace shopstab::testutil {

std::shared_ptr<const ProblemInstance> share(ProblemInstance instance) {
    return std::make_shared<const ProblemInstance>(std::move(instance));
}

ProblemInstance make_instance(const std::string& name, std::vector<std::string> machines,
                              std::vector<JobSpec> jobs) {
    ProblemInstance instance;
    instance.name = name;
    instance.machines = std::move(machines);
    Tick total = 0;
    for (JobSpec& spec : jobs) {
        Job job;
        job.id = spec.id;
        job.due = spec.due;
        job.weight = spec.weight;
        int k = 1;
        for (auto& [machine, duration] : spec.ops) {
            job.operations.push_back({job.id, k++, machine, duration});
            total += duration;
        }
        instance.jobs.push_back(std::move(job));
    }
    instance.horizon = std::max<Tick>(1, 4 * total);
    instance.check();
    return instance;
}

Schedule make_schedule(std::shared_ptr<const ProblemInstance> instance,
                       std::vector<std::tuple<std::string, int, Tick>> starts) {
    Schedule schedule;
    schedule.instance = std::move(instance);
    for (auto& [job, op, start] : starts) schedule.starts[OpKey{job, op}] = start;
    return schedule;
}

ProblemInstance random_instance(Rng& rng, int max_jobs, int max_machines, Tick dur_lo,
                                Tick dur_hi) {
    int n_jobs = rng.uniform_int(1, max_jobs);
    int n_machines = rng.uniform_int(1, max_machines);
    ProblemInstance instance;
    instance.name = "rnd";
    for (int m = 0; m < n_machines; ++m) instance.machines.push_back("M" + std::to_string(m));
    Tick total = 0;
    for (int j = 0; j < n_jobs; ++j) {
        Job job;
        job.id = "J" + std::to_string(j);
        job.weight = static_cast<double>(rng.uniform(1, 9));
        std::vector<std::string> route = instance.machines;
        rng.shuffle(route);
        Tick sum = 0;
        for (std::size_t k = 0; k < route.size(); ++k) {
            Tick d = rng.uniform(dur_lo, dur_hi);
            job.operations.push_back({job.id, static_cast<int>(k) + 1, route[k], d});
            sum += d;
        }
        job.due = 2 * sum;
        total += sum;
        instance.jobs.push_back(std::move(job));
    }
    instance.horizon = std::max<Tick>(1, 4 * total);
    instance.check();
    return instance;
}

Schedule random_schedule(const std::shared_ptr<const ProblemInstance>& instance, Rng& rng) {
    struct Head {
        const Job* job;
        std::size_t next = 0;
        Tick ready = 0;
    };
    std::vector<Head> heads;
    for (const Job& job : instance->jobs) heads.push_back({&job, 0, 0});
    std::map<std::string, Tick> machine_free;
    for (const std::string& m : instance->machines) machine_free[m] = 0;

    Schedule out;
    out.instance = instance;
    while (!heads.empty()) {
        Tick best = std::numeric_limits<Tick>::max();
        std::vector<std::size_t> ready;
        for (std::size_t i = 0; i < heads.size(); ++i) {
            const Operation& op = heads[i].job->operations[heads[i].next];
            Tick est = std::max(heads[i].ready, machine_free.at(op.machine));
            if (est < best) {
                best = est;
                ready.clear();
            }
            if (est == best) ready.push_back(i);
        }
        std::size_t pick = ready[static_cast<std::size_t>(
            rng.uniform(0, static_cast<Tick>(ready.size()) - 1))];
        Head& head = heads[pick];
        const Operation& op = head.job->operations[head.next];
        out.starts[op.key()] = best;
        machine_free[op.machine] = best + op.duration;
        head.ready = best + op.duration;
        if (++head.next == head.job->operations.size())
            heads.erase(heads.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

}  // namespace shopstab::testutil
