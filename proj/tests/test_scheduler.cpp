#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "coprime/patterns.hpp"
#include "coprime/scheduler.hpp"

using namespace coprime;

namespace {

/// Round-trip check: replaying the schedules must reconstruct, per sampler
/// and signal, exactly the instants of the input patterns.
void check_round_trip(const std::vector<SamplingPattern>& patterns,
                      const std::vector<SwitchSchedule>& schedules) {
    std::map<std::pair<std::string, std::string>, std::set<Tick>> want;
    for (const auto& p : patterns)
        for (Tick t : p.instants)
            want[{p.sampler_id, p.signal_id}].insert(t);

    std::map<std::pair<std::string, std::string>, std::set<Tick>> got;
    for (const auto& s : schedules)
        for (const auto& r : replay_schedule(s))
            got[{s.switch_id, r.signal_id}].insert(r.tick);

    CHECK(got == want);
}

} // namespace

TEST_CASE("M sampler schedule for the extended TDM pair") {
    const auto pair = make_coprime_pair(4, 3);
    const BranchPair x1 = gen_extended_x1(pair);
    const BranchPair x2 = gen_extended_x2(pair);

    const auto schedules = build_schedule({x1.coarse, x2.coarse});
    REQUIRE(schedules.size() == 1);
    const SwitchSchedule& m = schedules.front();
    CHECK(m.switch_id == "M");
    REQUIRE(m.events.size() == 2); // a single position change

    CHECK(m.events[0].position == "x1");
    CHECK(m.events[1].position == "x2");
    // the change happens strictly between the last x1 sample (8) and the
    // first x2 sample (12)
    CHECK(m.events[1].time > 8);
    CHECK(m.events[1].time < 12);
    CHECK(m.events[0].transition > 0);
    CHECK(m.events[0].time + m.events[0].hold + m.events[0].transition == m.events[1].time);

    check_round_trip({x1.coarse, x2.coarse}, schedules);
}

TEST_CASE("N sampler alternates every half period in two-sampler TDM") {
    const auto pair = make_coprime_pair(4, 3);
    const BranchPair x1 = gen_tdm_two_sampler_x1(pair);
    const BranchPair x2 = gen_tdm_two_sampler_x2(pair);

    const auto schedules = build_schedule({x1.fine, x2.fine});
    REQUIRE(schedules.size() == 1);
    const SwitchSchedule& nsw = schedules.front();
    REQUIRE(nsw.events.size() == 16); // 8 + 8 alternating dwells
    for (std::size_t i = 0; i < nsw.events.size(); ++i) {
        CHECK(nsw.events[i].position == (i % 2 == 0 ? "x1" : "x2"));
        CHECK(nsw.events[i].sample_ticks.size() == 1);
        if (i + 1 < nsw.events.size())
            CHECK(nsw.events[i].transition > 0);
    }
    check_round_trip({x1.fine, x2.fine}, schedules);
}

TEST_CASE("full two-switch schedule covers both signals") {
    const auto pair = make_coprime_pair(4, 3);
    const BranchPair x1 = gen_tdm_two_sampler_x1(pair);
    const BranchPair x2 = gen_tdm_two_sampler_x2(pair);

    const std::vector<SamplingPattern> patterns = {x1.coarse, x1.fine, x2.coarse, x2.fine};
    const auto schedules = build_schedule(patterns);
    REQUIRE(schedules.size() == 2);
    check_round_trip(patterns, schedules);
}

TEST_CASE("transition windows scale with the governing gap") {
    // With dwell boundaries at gap midpoints, transition = ceil(gap/2) - tail,
    // so wider inter-sample distances buy proportionally more settling time.
    const auto pair = make_coprime_pair(4, 3);
    const BranchPair x1 = gen_tdm_two_sampler_x1(pair);
    const BranchPair x2 = gen_tdm_two_sampler_x2(pair);

    const auto m_sched = build_schedule({x1.coarse, x2.coarse}).front();
    const auto n_sched = build_schedule({x1.fine, x2.fine}).front();

    // N-switch gaps are N*q/2 = 3 ticks; M-switch signal gap is M*q = 8.
    const Tick n_gap = 3, m_gap = 8;
    CHECK(n_sched.events[0].transition == (n_gap + 1) / 2 - 1);
    CHECK(m_sched.events[0].transition == (m_gap + 1) / 2 - 1);
    CHECK(m_sched.events[0].transition > n_sched.events[0].transition);
}

TEST_CASE("slot collisions and invalid holds are rejected") {
    const TickGrid g = make_grid(1, 16);
    const auto a = make_pattern(g, {0, 8}, "x1", "S");
    const auto b = make_pattern(g, {4, 8}, "x2", "S");
    CHECK_THROWS_MATCHES(build_schedule({a, b}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::SlotCollision;
                         }));

    // adjacent ticks of different signals cannot fit a 2-tick hold
    const auto c = make_pattern(g, {0, 4}, "x1", "S");
    const auto d = make_pattern(g, {5, 9}, "x2", "S");
    CHECK_THROWS_MATCHES(build_schedule({c, d}, ScheduleOptions{2}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::TooFast;
                         }));
    CHECK_NOTHROW(build_schedule({c, d}));

    const auto e = make_pattern(make_grid(2, 32), {2}, "x2", "S");
    CHECK_THROWS_MATCHES(build_schedule({a, e}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& err) {
                             return err.code() == ErrorCode::GridMismatch;
                         }));
}

TEST_CASE("schedule round trip on randomized configurations") {
    std::mt19937_64 rng(12345);
    const std::pair<int, int> pairs[] = {{4, 3}, {3, 2}, {5, 3}, {5, 2}, {7, 3}, {7, 4}, {8, 3}};
    for (int iter = 0; iter < 60; ++iter) {
        const auto [m, n] = pairs[rng() % std::size(pairs)];
        const auto pair = make_coprime_pair(m, n);
        std::vector<SamplingPattern> patterns;
        switch (rng() % 3) {
        case 0: { // three-sampler extended TDM
            BranchPair x1 = gen_extended_x1(pair);
            BranchPair x2 = gen_extended_x2(pair);
            x1.fine.sampler_id = "N1";
            x2.fine.sampler_id = "N2";
            patterns = {x1.coarse, x1.fine, x2.coarse, x2.fine};
            break;
        }
        case 1: { // two-sampler extended TDM with the half shift
            const BranchPair x1 = gen_tdm_two_sampler_x1(pair);
            const BranchPair x2 = gen_tdm_two_sampler_x2(pair);
            patterns = {x1.coarse, x1.fine, x2.coarse, x2.fine};
            break;
        }
        default: { // ExSCA on two switched samplers
            const int ex = 1 + static_cast<int>(rng() % 3);
            const Tick s12 = static_cast<Tick>(rng() % (ex * n));
            const auto cfg = make_exsca_config(pair, ex, 0, s12);
            const BranchPair x1 = gen_exsca(cfg, 1, 4 * ex * m * n);
            const BranchPair x2 = gen_exsca(cfg, 2, 4 * ex * m * n);
            patterns = {x1.coarse, x1.fine, x2.coarse, x2.fine};
            break;
        }
        }
        const auto schedules = build_schedule(patterns);
        check_round_trip(patterns, schedules);
        for (const auto& s : schedules)
            for (std::size_t i = 0; i < s.events.size(); ++i) {
                const SwitchEvent& ev = s.events[i];
                // every sample instant lies inside its dwell's hold window
                for (Tick t : ev.sample_ticks) {
                    CHECK(t >= ev.time);
                    CHECK(t < ev.time + ev.hold);
                }
                if (i + 1 < s.events.size()) {
                    CHECK(ev.time + ev.hold + ev.transition == s.events[i + 1].time);
                    if (ev.position != s.events[i + 1].position)
                        CHECK(ev.transition > 0);
                }
            }
    }
}

TEST_CASE("ExSCA overlap reports") {
    const auto pair = make_coprime_pair(4, 3);

    SECTION("a known-bad parameter choice") {
        const auto rep = check_exsca_overlap(make_exsca_config(pair, 2, 0, 1), 48);
        CHECK(rep.aliasing_hazard());
        CHECK(rep.ticks_for(2) == std::vector<Tick>{4, 28});
        CHECK(rep.ticks_for(1).empty());
    }

    SECTION("another shifted choice, oracle-checked") {
        const auto rep = check_exsca_overlap(make_exsca_config(pair, 2, 0, 3), 48);
        CHECK(rep.ticks_for(2) == std::vector<Tick>{12, 36});
    }

    SECTION("fully disjoint progressions give an empty report") {
        const auto rep = check_exsca_overlap(make_exsca_config(pair, 4, 0, 1), 96);
        CHECK_FALSE(rep.aliasing_hazard());
        CHECK(rep.ticks_for(1).empty());
        CHECK(rep.ticks_for(2).empty());
    }
}

TEST_CASE("shift search") {
    const auto pair = make_coprime_pair(4, 3);

    SECTION("excludes the overlapping shift and ranks by coverage") {
        const ShiftSearchResult res = search_shift(pair, 2, 48);
        CHECK_FALSE(res.candidate(1).feasible);
        CHECK(res.candidate(1).overlap_ticks == std::vector<Tick>{4, 28});
        CHECK(res.candidate(0).feasible);
        CHECK(res.candidate(2).feasible);
        CHECK(res.candidate(4).feasible);
        CHECK_FALSE(res.candidate(3).feasible);
        CHECK_FALSE(res.candidate(5).feasible);
        CHECK(res.best_s12 == 2); // 65 covered lags beats 59 at shifts 0 and 4
        CHECK(res.candidate(2).covered_lags == 65);
        CHECK(res.candidate(0).covered_lags == 59);

        // the winner never carries a second-signal overlap
        CHECK(check_exsca_overlap(make_exsca_config(pair, 2, 0, res.best_s12), 48)
                  .ticks_for(2)
                  .empty());
    }

    SECTION("ex=1 admits every shift") {
        const ShiftSearchResult res = search_shift(pair, 1, 48);
        for (const auto& c : res.candidates)
            CHECK(c.feasible);
        CHECK(res.best_s12 == 1); // 137 covered lags beats 131
    }

    SECTION("no feasible shift raises") {
        CHECK_THROWS_MATCHES(search_shift(make_coprime_pair(5, 3), 1, 30), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::NoFeasibleShift;
                             }));
    }
}

TEST_CASE("assignment planning") {
    SECTION("two Nyquist signals on one double-rate sampler fit exactly") {
        AssignmentModel m;
        m.signals = {{"x1", 1.0}, {"x2", 1.0}};
        m.samplers = {{"S", 0.5}};
        m.edges = {{"x1", "S", 0.0}, {"x2", "S", 0.0}};
        const AssignmentReport rep = plan_assignment(m);
        CHECK(rep.feasible);
        REQUIRE(rep.loads.size() == 1);
        CHECK(rep.loads[0].utilization == Catch::Approx(1.0));
    }

    SECTION("three signals on two co-prime samplers via ex=3 slotting") {
        const double M = 4, N = 3, ex = 3;
        AssignmentModel m;
        m.signals = {{"x1", 1.0}, {"x2", 1.0}, {"x3", 1.0}};
        m.samplers = {{"SM", M}, {"SN", N}};
        for (const auto* sig : {"x1", "x2", "x3"}) {
            m.edges.push_back({sig, "SM", ex * M});
            m.edges.push_back({sig, "SN", ex * N});
        }
        const AssignmentReport rep = plan_assignment(m);
        CHECK(rep.feasible);
        for (const auto& l : rep.loads)
            CHECK(l.utilization == Catch::Approx(1.0));
    }

    SECTION("a disconnected signal is infeasible") {
        AssignmentModel m;
        m.signals = {{"x1", 1.0}};
        m.samplers = {{"S", 0.5}};
        const AssignmentReport rep = plan_assignment(m);
        CHECK_FALSE(rep.feasible);
        CHECK(rep.unconnected_signals == std::vector<std::string>{"x1"});
    }

    SECTION("demand faster than the sampler is flagged") {
        AssignmentModel m;
        m.signals = {{"x1", 1.0}};
        m.samplers = {{"S", 2.0}};
        m.edges = {{"x1", "S", 1.0}};
        const AssignmentReport rep = plan_assignment(m);
        CHECK_FALSE(rep.feasible);
        CHECK(rep.overdriven_edges == std::vector<std::string>{"x1->S"});
    }
}
