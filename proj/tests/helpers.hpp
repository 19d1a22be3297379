#pragma once

#include "shopstab/model.hpp"
#include "shopstab/rng.hpp"

#include <memory>

namespace shopstab::testutil {

std::shared_ptr<const ProblemInstance> share(ProblemInstance instance);

// Compact builder: one job per row, each row a list of (machine, duration)
// pairs; ops numbered 1..n in row order.
struct JobSpec {
    std::string id;
    std::vector<std::pair<std::string, Tick>> ops;
    std::optional<Tick> due;
    double weight = 1.0;
};
ProblemInstance make_instance(const std::string& name, std::vector<std::string> machines,
                              std::vector<JobSpec> jobs);

Schedule make_schedule(std::shared_ptr<const ProblemInstance> instance,
                       std::vector<std::tuple<std::string, int, Tick>> starts);

// Random classic job-shop instance: jobs x machines, one visit per machine.
ProblemInstance random_instance(Rng& rng, int max_jobs, int max_machines, Tick dur_lo = 1,
                                Tick dur_hi = 9);

// Random feasible schedule via test-local non-delay dispatch with random
// tie-breaking; independent of the production scheduling code.
Schedule random_schedule(const std::shared_ptr<const ProblemInstance>& instance, Rng& rng);

}  // namespace shopstab::testutil
