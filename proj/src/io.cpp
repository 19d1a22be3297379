#include "shopstab/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace shopstab {

namespace {

using nlohmann::json;

json job_to_json(const Job& job) {
    json ops = json::array();
    for (const Operation& op : job.operations) ops.push_back({op.machine, op.duration});
    json j{{"id", job.id}, {"ops", std::move(ops)}};
    // Keep integral weights as integers; time fields are integers always.
    if (job.weight == static_cast<double>(static_cast<long long>(job.weight)))
        j["weight"] = static_cast<long long>(job.weight);
    else
        j["weight"] = job.weight;
    if (job.due) j["due"] = *job.due;
    return j;
}

Job job_from_json(const json& j) {
    Job job;
    job.id = j.at("id").get<std::string>();
    job.weight = j.value("weight", 1.0);
    if (j.contains("due") && !j.at("due").is_null()) job.due = j.at("due").get<Tick>();
    int index = 1;
    for (const auto& row : j.at("ops")) {
        Operation op;
        op.job = job.id;
        op.op = index++;
        op.machine = row.at(0).get<std::string>();
        op.duration = row.at(1).get<Tick>();
        job.operations.push_back(std::move(op));
    }
    return job;
}

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(std::string("malformed ") + what + " JSON");
    return j;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
    json jobs = json::array();
    for (const Job& job : instance.jobs) jobs.push_back(job_to_json(job));
    json j{{"name", instance.name},
           {"horizon", instance.horizon},
           {"machines", instance.machines},
           {"jobs", std::move(jobs)}};
    if (!instance.down_windows.empty()) {
        json wins = json::array();
        for (const DownWindow& w : instance.down_windows)
            wins.push_back({w.machine, w.from, w.until});
        j["down_windows"] = std::move(wins);
    }
    return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
    json j = parse(text, "instance");
    ProblemInstance instance;
    instance.name = j.at("name").get<std::string>();
    instance.horizon = j.at("horizon").get<Tick>();
    instance.machines = j.at("machines").get<std::vector<std::string>>();
    for (const auto& row : j.at("jobs")) instance.jobs.push_back(job_from_json(row));
    if (j.contains("down_windows"))
        for (const auto& row : j.at("down_windows"))
            instance.down_windows.push_back(
                {row.at(0).get<std::string>(), row.at(1).get<Tick>(), row.at(2).get<Tick>()});
    instance.check();
    return instance;
}

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
    spit(path, instance_to_json(instance));
}

std::shared_ptr<const ProblemInstance> load_instance(const std::filesystem::path& path) {
    try {
        return std::make_shared<const ProblemInstance>(instance_from_json(slurp(path)));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::string schedule_to_json(const Schedule& schedule) {
    json starts = json::array();
    for (const auto& [key, start] : schedule.starts) starts.push_back({key.job, key.op, start});
    json j{{"instance", schedule.instance ? schedule.instance->name : ""},
           {"starts", std::move(starts)}};
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text,
                            std::shared_ptr<const ProblemInstance> instance) {
    json j = parse(text, "schedule");
    std::string named = j.at("instance").get<std::string>();
    if (instance && !named.empty() && named != instance->name)
        throw std::runtime_error("schedule was written for instance '" + named +
                                 "', not '" + instance->name + "'");
    Schedule schedule;
    schedule.instance = std::move(instance);
    for (const auto& row : j.at("starts")) {
        OpKey key{row.at(0).get<std::string>(), row.at(1).get<int>()};
        if (!schedule.starts.emplace(key, row.at(2).get<Tick>()).second)
            throw std::runtime_error("duplicate start entry for " + to_string(key));
    }
    return schedule;
}

void save_schedule(const Schedule& schedule, const std::filesystem::path& path) {
    spit(path, schedule_to_json(schedule));
}

Schedule load_schedule(const std::filesystem::path& path,
                       std::shared_ptr<const ProblemInstance> instance) {
    try {
        return schedule_from_json(slurp(path), std::move(instance));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::string events_to_json(const std::vector<RescheduleEvent>& events) {
    json rows = json::array();
    for (const RescheduleEvent& e : events) {
        json row{{"t0", e.t0}, {"kind", to_string(e.kind)}};
        switch (e.kind) {
            case EventKind::machine_down:
                row["machine"] = e.machine;
                row["from"] = e.from;
                row["until"] = e.until;
                break;
            case EventKind::new_job:
            case EventKind::rush_job:
                row["job"] = job_to_json(e.job);
                break;
            case EventKind::cancel_job:
                row["job"] = e.job_id;
                break;
            case EventKind::due_date_change:
                row["job"] = e.job_id;
                row["due"] = e.new_due ? json(*e.new_due) : json(nullptr);
                break;
            case EventKind::weight_change:
                row["job"] = e.job_id;
                row["weight"] = e.new_weight;
                break;
        }
        rows.push_back(std::move(row));
    }
    return json{{"events", std::move(rows)}}.dump(2) + "\n";
}

std::vector<RescheduleEvent> events_from_json(const std::string& text) {
    json j = parse(text, "events");
    std::vector<RescheduleEvent> events;
    for (const auto& row : j.at("events")) {
        RescheduleEvent e;
        e.t0 = row.at("t0").get<Tick>();
        e.kind = event_kind_from_string(row.at("kind").get<std::string>());
        switch (e.kind) {
            case EventKind::machine_down:
                e.machine = row.at("machine").get<std::string>();
                e.from = row.at("from").get<Tick>();
                e.until = row.at("until").get<Tick>();
                break;
            case EventKind::new_job:
            case EventKind::rush_job:
                e.job = job_from_json(row.at("job"));
                break;
            case EventKind::cancel_job:
                e.job_id = row.at("job").get<std::string>();
                break;
            case EventKind::due_date_change:
                e.job_id = row.at("job").get<std::string>();
                if (!row.at("due").is_null()) e.new_due = row.at("due").get<Tick>();
                break;
            case EventKind::weight_change:
                e.job_id = row.at("job").get<std::string>();
                e.new_weight = row.at("weight").get<double>();
                break;
        }
        events.push_back(std::move(e));
    }
    return events;
}

void save_events(const std::vector<RescheduleEvent>& events, const std::filesystem::path& path) {
    spit(path, events_to_json(events));
}

std::vector<RescheduleEvent> load_events(const std::filesystem::path& path) {
    try {
        return events_from_json(slurp(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace shopstab
