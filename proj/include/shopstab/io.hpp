#pragma once

#include "shopstab/dynamics.hpp"
#include "shopstab/model.hpp"

#include <filesystem>

namespace shopstab {

// JSON persistence. All time fields are integers so files round-trip
// bit-exactly; parse problems surface as std::runtime_error carrying the
// file name.

std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);
void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);
std::shared_ptr<const ProblemInstance> load_instance(const std::filesystem::path& path);

std::string schedule_to_json(const Schedule& schedule);
// The schedule file names its instance; binding against a different one is
// an error.
Schedule schedule_from_json(const std::string& text,
                            std::shared_ptr<const ProblemInstance> instance);
void save_schedule(const Schedule& schedule, const std::filesystem::path& path);
Schedule load_schedule(const std::filesystem::path& path,
                       std::shared_ptr<const ProblemInstance> instance);

std::string events_to_json(const std::vector<RescheduleEvent>& events);
std::vector<RescheduleEvent> events_from_json(const std::string& text);
void save_events(const std::vector<RescheduleEvent>& events, const std::filesystem::path& path);
std::vector<RescheduleEvent> load_events(const std::filesystem::path& path);

}  // namespace shopstab
