#include "shopstab/io.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace shopstab;
using namespace shopstab::testutil;

TEST_CASE("instance round trip is bit exact") {
    Rng rng(101);
    for (int round = 0; round < 20; ++round) {
        ProblemInstance inst = random_instance(rng, 6, 5);
        inst.down_windows.push_back({"M0", 3, 9});
        std::string text = instance_to_json(inst);
        ProblemInstance back = instance_from_json(text);
        CHECK(instance_to_json(back) == text);
    }
}

TEST_CASE("schedule round trip preserves the validation verdict") {
    Rng rng(102);
    for (int round = 0; round < 20; ++round) {
        auto inst = share(random_instance(rng, 6, 5));
        Schedule sched = random_schedule(inst, rng);
        if (round % 2 == 1) {
            // Damage half of them: shift one start below a predecessor.
            auto it = sched.starts.rbegin();
            it->second = 0;
        }
        std::string text = schedule_to_json(sched);
        Schedule back = schedule_from_json(text, inst);
        CHECK(schedule_to_json(back) == text);
        CHECK(validate(back) == validate(sched));
    }
}

TEST_CASE("schedule loader rejects a mismatched instance") {
    auto a = share(make_instance("alpha", {"M0"}, {{"J0", {{"M0", 1}}}}));
    auto b = share(make_instance("beta", {"M0"}, {{"J0", {{"M0", 1}}}}));
    auto sched = make_schedule(a, {{"J0", 1, 0}});
    CHECK_THROWS_AS(schedule_from_json(schedule_to_json(sched), b), std::runtime_error);
}

TEST_CASE("schedule loader rejects duplicate start rows") {
    auto inst = share(make_instance("alpha", {"M0"}, {{"J0", {{"M0", 1}}}}));
    std::string text = R"({"instance":"alpha","starts":[["J0",1,0],["J0",1,2]]})";
    CHECK_THROWS_AS(schedule_from_json(text, inst), std::runtime_error);
}

TEST_CASE("events round trip") {
    Job rush;
    rush.id = "R0";
    rush.operations = {{"R0", 1, "M0", 3}, {"R0", 2, "M1", 2}};
    rush.due = 40;
    rush.weight = 9.0;

    std::vector<RescheduleEvent> events(6);
    events[0].t0 = 4;
    events[0].kind = EventKind::machine_down;
    events[0].machine = "M1";
    events[0].from = 5;
    events[0].until = 12;
    events[1].t0 = 6;
    events[1].kind = EventKind::new_job;
    events[1].job = rush;
    events[2].t0 = 7;
    events[2].kind = EventKind::rush_job;
    events[2].job = rush;
    events[3].t0 = 8;
    events[3].kind = EventKind::cancel_job;
    events[3].job_id = "J2";
    events[4].t0 = 9;
    events[4].kind = EventKind::due_date_change;
    events[4].job_id = "J1";
    events[4].new_due = 77;
    events[5].t0 = 10;
    events[5].kind = EventKind::weight_change;
    events[5].job_id = "J0";
    events[5].new_weight = 2.5;

    std::string text = events_to_json(events);
    auto back = events_from_json(text);
    CHECK(events_to_json(back) == text);
    REQUIRE(back.size() == 6);
    CHECK(back[0].until == 12);
    CHECK(back[1].job.operations.size() == 2);
    CHECK(back[4].new_due == Tick{77});
}

TEST_CASE("malformed text is rejected") {
    CHECK_THROWS_AS(instance_from_json("{not json"), std::runtime_error);
    CHECK_THROWS_AS(events_from_json("[]"), std::exception);
}
