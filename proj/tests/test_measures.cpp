#include "shopstab/measures.hpp"

#include "helpers.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace shopstab;
using namespace shopstab::testutil;

namespace {

// One machine, n independent single-op jobs: the simplest carrier for
// start-vector pairs.
std::shared_ptr<const ProblemInstance> line_instance(int n, Tick duration = 1) {
    std::vector<JobSpec> jobs;
    for (int j = 0; j < n; ++j)
        jobs.push_back({"J" + std::to_string(j), {{"M" + std::to_string(j), duration}}});
    std::vector<std::string> machines;
    for (int j = 0; j < n; ++j) machines.push_back("M" + std::to_string(j));
    return share(make_instance("line", std::move(machines), std::move(jobs)));
}

PairedSchedules pair_of(const std::shared_ptr<const ProblemInstance>& inst,
                        std::vector<Tick> s, std::vector<Tick> s_prime) {
    Schedule x{inst, {}}, xp{inst, {}};
    for (std::size_t j = 0; j < s.size(); ++j) {
        OpKey key{"J" + std::to_string(j), 1};
        x.starts[key] = s[j];
        xp.starts[key] = s_prime[j];
    }
    return pair_schedules(x, xp);
}

double per_op_sum(const MeasureReport& r) {
    double sum = 0;
    for (auto& [key, value] : r.per_op) sum += value;
    return sum;
}

}  // namespace

TEST_CASE("delta_start") {
    CHECK(delta_start(5, 5) == 0);
    CHECK(delta_start(3, 7) == 4);
    CHECK(delta_start(7, 3) == 4);
}

TEST_CASE("closeness") {
    CHECK(closeness(0, 0, 0) == 0);
    CHECK(closeness(10, 4, 2) == 2);
    CHECK(closeness(1, 5, 3) == -2);  // frozen side: may go negative
}

TEST_CASE("impact") {
    CHECK(impact(0, 0.25) == doctest::Approx(1.0));
    CHECK(impact(123, 1.0) == doctest::Approx(1.0));
    CHECK(impact(3, 0.5) == doctest::Approx(0.125));
    CHECK(impact(-1, 0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(impact(1, 0.0), std::domain_error);
}

TEST_CASE("pairing matches keys and reports the rest") {
    auto inst = share(make_instance("a", {"M0"},
                                    {{"J0", {{"M0", 2}}}, {"J1", {{"M0", 3}}}}));
    auto x = make_schedule(inst, {{"J0", 1, 0}, {"J1", 1, 2}});

    SUBCASE("identical key sets") {
        auto p = pair_schedules(x, x);
        CHECK(p.paired.size() == 2);
        CHECK(p.added.empty());
        CHECK(p.removed.empty());
    }
    SUBCASE("rush job appears only in x'") {
        auto inst2 = share(make_instance("a", {"M0"},
                                         {{"J0", {{"M0", 2}}},
                                          {"J1", {{"M0", 3}}},
                                          {"R0", {{"M0", 1}, {"M0", 1}}}}));
        auto xp = make_schedule(inst2, {{"J0", 1, 0}, {"J1", 1, 2}, {"R0", 1, 5}, {"R0", 2, 6}});
        auto p = pair_schedules(x, xp);
        CHECK(p.added.size() == 2);
        CHECK(p.removed.empty());
    }
    SUBCASE("canceled job appears only in x") {
        auto inst3 = share(make_instance("a", {"M0"},
                                         {{"J0", {{"M0", 2}}},
                                          {"J1", {{"M0", 3}}},
                                          {"C0", {{"M0", 1}, {"M0", 1}, {"M0", 1}}}}));
        auto x3 = make_schedule(inst3, {{"J0", 1, 0}, {"J1", 1, 2},
                                        {"C0", 1, 5}, {"C0", 2, 6}, {"C0", 3, 7}});
        auto p = pair_schedules(x3, x);
        CHECK(p.removed.size() == 3);
        CHECK(p.added.empty());
    }
    SUBCASE("conflicting durations are an error") {
        auto inst4 = share(make_instance("a", {"M0"},
                                         {{"J0", {{"M0", 9}}}, {"J1", {{"M0", 3}}}}));
        auto x4 = make_schedule(inst4, {{"J0", 1, 0}, {"J1", 1, 9}});
        CHECK_THROWS_AS(pair_schedules(x, x4), std::invalid_argument);
    }
}

TEST_CASE("wu measure") {
    auto inst = line_instance(2);
    CHECK(wu_measure(pair_of(inst, {0, 5}, {0, 5})).total == doctest::Approx(0.0));
    CHECK(wu_measure(pair_of(inst, {0, 5}, {2, 4})).total == doctest::Approx(3.0));
    CHECK(wu_measure(pair_of(inst, {2, 4}, {0, 5})).total == doctest::Approx(3.0));
}

TEST_CASE("lin measure counts only earlier starts") {
    auto inst = line_instance(2);
    CHECK(lin_measure(pair_of(inst, {0, 5}, {3, 7})).total == doctest::Approx(0.0));
    CHECK(lin_measure(pair_of(inst, {10, 10}, {7, 12})).total == doctest::Approx(3.0));
}

TEST_CASE("lin decomposition of wu on random pairs") {
    Rng rng(11);
    auto inst = line_instance(12);
    for (int round = 0; round < 200; ++round) {
        std::vector<Tick> s, sp;
        for (int j = 0; j < 12; ++j) {
            s.push_back(rng.uniform(0, 40));
            sp.push_back(rng.uniform(0, 40));
        }
        auto fwd = pair_of(inst, s, sp);
        auto rev = pair_of(inst, sp, s);
        CHECK(lin_measure(fwd).total + lin_measure(rev).total ==
              doctest::Approx(wu_measure(fwd).total).epsilon(1e-12));
    }
}

TEST_CASE("combined measure degenerates to wu and lin") {
    auto inst = line_instance(3);
    auto p = pair_of(inst, {0, 5, 9}, {2, 4, 9});
    CHECK(combined_measure(p, 1.0, 1.0).total == doctest::Approx(wu_measure(p).total));
    CHECK(combined_measure(p, 1.0, 0.0).total == doctest::Approx(lin_measure(p).total));
    auto all_earlier = pair_of(inst, {5, 6, 7}, {1, 2, 3});
    CHECK(combined_measure(all_earlier, 0.0, 1.0).total == doctest::Approx(0.0));
    CHECK_THROWS_AS(combined_measure(p, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("job level measure") {
    auto inst = share(make_instance("j", {"M0", "M1"},
                                    {{"J0", {{"M0", 2}, {"M1", 5}}}}));
    SUBCASE("start shift with fixed completion") {
        // S: 0 -> 2, C: 9 -> 9.
        auto x = make_schedule(inst, {{"J0", 1, 0}, {"J0", 2, 4}});
        auto xp = make_schedule(inst, {{"J0", 1, 2}, {"J0", 2, 4}});
        auto r = job_level_measure(pair_schedules(x, xp), 1.0, 1.0);
        CHECK(r.total == doctest::Approx(2.0));
        CHECK(r.per_op.count(OpKey{"J0", 0}) == 1);
    }
    SUBCASE("identical schedules give zero") {
        auto x = make_schedule(inst, {{"J0", 1, 0}, {"J0", 2, 4}});
        CHECK(job_level_measure(pair_schedules(x, x), 1.0, 1.0).total == doctest::Approx(0.0));
    }
    SUBCASE("completion-only variant ignores start shifts") {
        auto x = make_schedule(inst, {{"J0", 1, 0}, {"J0", 2, 4}});
        auto xp = make_schedule(inst, {{"J0", 1, 2}, {"J0", 2, 4}});
        CHECK(job_level_measure(pair_schedules(x, xp), 0.0, 1.0).total == doctest::Approx(0.0));
    }
    SUBCASE("partially present jobs are skipped and counted") {
        auto other = share(make_instance("j", {"M0", "M1"},
                                         {{"J0", {{"M0", 2}, {"M1", 5}}},
                                          {"J1", {{"M0", 1}}}}));
        auto x = make_schedule(other, {{"J0", 1, 0}, {"J0", 2, 4}, {"J1", 1, 9}});
        auto xp = make_schedule(inst, {{"J0", 1, 0}, {"J0", 2, 4}});
        auto r = job_level_measure(pair_schedules(x, xp), 1.0, 1.0);
        CHECK(r.total == doctest::Approx(0.0));
        CHECK(r.skipped_count == 1);
        CHECK(r.removed_count == 1);
    }
}

TEST_CASE("sequence measure") {
    auto inst = line_instance(3);
    SUBCASE("identical schedules have no flips") {
        CHECK(sequence_measure(pair_of(inst, {0, 1, 2}, {0, 1, 2})).total == doctest::Approx(0.0));
    }
    SUBCASE("full reversal flips every pair") {
        CHECK(sequence_measure(pair_of(inst, {0, 1, 2}, {2, 1, 0})).total == doctest::Approx(3.0));
    }
    SUBCASE("ties never count") {
        CHECK(sequence_measure(pair_of(inst, {0, 0, 2}, {2, 1, 0})).total == doctest::Approx(2.0));
        CHECK(sequence_measure(pair_of(inst, {0, 1, 2}, {1, 1, 0})).total == doctest::Approx(2.0));
    }
}

TEST_CASE("sequence measure agrees with the brute force count on random pairs") {
    Rng rng(23);
    for (int round = 0; round < 300; ++round) {
        auto inst = share(random_instance(rng, 7, 7));
        auto x = random_schedule(inst, rng);
        auto xp = random_schedule(inst, rng);
        auto p = pair_schedules(x, xp);
        for (auto scope : {SequenceScope::global, SequenceScope::per_machine}) {
            auto r = sequence_measure(p, scope);
            CHECK(r.total == doctest::Approx(static_cast<double>(
                                 oracle::brute_sequence_count(p, scope))));
            CHECK(r.total == doctest::Approx(per_op_sum(r)));
        }
    }
}

TEST_CASE("instability") {
    auto inst = line_instance(2);
    SUBCASE("identical schedules give zero for any config") {
        auto p = pair_of(inst, {3, 8}, {3, 8});
        for (double decay : {0.1, 0.5, 1.0})
            CHECK(instability(p, {decay, 2, false}).total == doctest::Approx(0.0));
    }
    SUBCASE("single term worked example") {
        auto one = line_instance(1);
        auto p = pair_of(one, {1}, {3});
        CHECK(instability(p, {0.5, 0, false}).total == doctest::Approx(1.0));
    }
    SUBCASE("decay one reproduces wu") {
        auto p = pair_of(inst, {0, 9}, {4, 2});
        CHECK(instability(p, {1.0, 0, false}).total == doctest::Approx(wu_measure(p).total));
    }
    SUBCASE("near changes outweigh far changes of equal size") {
        auto p = pair_of(inst, {0, 10}, {2, 12});
        auto r = instability(p, {0.5, 0, false});
        CHECK(r.per_op.at(OpKey{"J0", 1}) > r.per_op.at(OpKey{"J1", 1}));
    }
    SUBCASE("frozen pairs are skipped by default and scored on demand") {
        auto p = pair_of(inst, {1, 10}, {5, 12});
        auto skipped = instability(p, {0.5, 3, false});
        CHECK(skipped.skipped_count == 1);
        CHECK(skipped.per_op.count(OpKey{"J0", 1}) == 0);
        auto included = instability(p, {0.5, 3, true});
        CHECK(included.skipped_count == 0);
        // dist = 1 - 3 = -2 inflates the impact above 1.
        CHECK(included.per_op.at(OpKey{"J0", 1}) == doctest::Approx(4.0 * 4.0));
    }
    SUBCASE("configuration errors") {
        auto p = pair_of(inst, {0, 1}, {0, 1});
        CHECK_THROWS_AS(instability(p, {0.0, 0, false}), std::invalid_argument);
        CHECK_THROWS_AS(instability(p, {-0.5, 0, false}), std::invalid_argument);
        CHECK_THROWS_AS(instability(p, {1.5, 0, false}), std::invalid_argument);
    }
}

TEST_CASE("instability matches the long-double oracle on random pairs") {
    Rng rng(31);
    auto inst = line_instance(20);
    for (int round = 0; round < 200; ++round) {
        std::vector<Tick> s, sp;
        for (int j = 0; j < 20; ++j) {
            s.push_back(rng.uniform(0, 60));
            sp.push_back(rng.uniform(0, 60));
        }
        auto p = pair_of(inst, s, sp);
        InstabilityConfig cfg{0.3 + 0.7 * rng.u01(), rng.uniform(0, 10), rng.u01() < 0.5};
        double got = instability(p, cfg).total;
        double want = oracle::term_by_term_instability(p, cfg);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("measure invariants on random pairs") {
    Rng rng(47);
    for (int round = 0; round < 100; ++round) {
        auto inst = share(random_instance(rng, 6, 5));
        auto x = random_schedule(inst, rng);
        auto xp = random_schedule(inst, rng);
        auto fwd = pair_schedules(x, xp);
        auto rev = pair_schedules(xp, x);
        InstabilityConfig cfg{0.9, 0, false};

        // Non-negativity & report consistency.
        for (const MeasureReport& r :
             {wu_measure(fwd), lin_measure(fwd), combined_measure(fwd, 0.5, 2.0),
              job_level_measure(fwd, 1.0, 1.0), sequence_measure(fwd), instability(fwd, cfg)}) {
            CHECK(r.total >= 0.0);
            CHECK(r.total == doctest::Approx(per_op_sum(r)).epsilon(1e-9));
        }

        // Symmetry in x, x'.
        CHECK(wu_measure(fwd).total == doctest::Approx(wu_measure(rev).total));
        CHECK(sequence_measure(fwd).total == doctest::Approx(sequence_measure(rev).total));
        CHECK(instability(fwd, cfg).total == doctest::Approx(instability(rev, cfg).total));

        // Wu reduction at decay one.
        CHECK(instability(fwd, {1.0, 0, false}).total ==
              doctest::Approx(wu_measure(fwd).total).epsilon(1e-9));

        // Shift covariance: moving t0 and every start by c changes nothing.
        Tick c = rng.uniform(1, 50);
        Schedule xs = x, xps = xp;
        for (auto& [key, start] : xs.starts) start += c;
        for (auto& [key, start] : xps.starts) start += c;
        InstabilityConfig shifted{cfg.decay, cfg.t0 + c, cfg.include_frozen};
        CHECK(instability(pair_schedules(xs, xps), shifted).total ==
              doctest::Approx(instability(fwd, cfg).total).epsilon(1e-9));
    }
}

TEST_CASE("instability strictly grows when a revised start moves further out") {
    auto inst = line_instance(1);
    auto near = pair_of(inst, {10}, {14});
    auto far = pair_of(inst, {10}, {19});  // min(s, s') unchanged at 10
    InstabilityConfig cfg{0.8, 0, false};
    CHECK(instability(far, cfg).total > instability(near, cfg).total);
}

TEST_CASE("wu is zero exactly when all paired starts agree") {
    auto inst = line_instance(3);
    auto same = pair_of(inst, {4, 7, 9}, {4, 7, 9});
    CHECK(wu_measure(same).total == 0.0);
    CHECK(instability(same, {0.7, 0, false}).total == 0.0);
    auto moved = pair_of(inst, {4, 7, 9}, {4, 8, 9});
    CHECK(wu_measure(moved).total > 0.0);
    CHECK(instability(moved, {0.7, 0, false}).total > 0.0);
}
