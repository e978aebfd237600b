#include <doctest.h>

#include <algorithm>

#include "facmech/io.hpp"
#include "facmech/verification.hpp"
#include "helpers.hpp"

using namespace facmech;
using facmech::test::make_inst;
using facmech::test::R;

namespace {

bool contains(const std::vector<Rat>& set, const Rat& v) {
    return std::find(set.begin(), set.end(), v) != set.end();
}

} // namespace

TEST_CASE("pivotal misreports cover candidates, midpoints, rivals and probes") {
    Instance inst = make_inst({{"5"}, {"0"}}, {"-1", "1"});
    auto set = pivotal_misreports(inst, 0);
    // Candidate coordinates, their midpoint, the other agent's position.
    for (const char* v : {"-1", "1", "0"}) CHECK(contains(set, R(v)));
    // eta = min positive gap / 4 = 1/4: shifted probes around each base point.
    for (const char* v : {"-5/4", "-3/4", "-1/4", "1/4", "3/4", "5/4"}) CHECK(contains(set, R(v)));
    // Sentinels: extremes -1 and 5, span 6, twice beyond.
    CHECK(contains(set, Rat(-13)));
    CHECK(contains(set, Rat(17)));
    CHECK(std::is_sorted(set.begin(), set.end()));
    CHECK(std::adjacent_find(set.begin(), set.end()) == set.end()); // deduplicated

    Instance pair = make_inst({{"0"}}, {"0", "2"});
    auto set2 = pivotal_misreports(pair, 0);
    CHECK(contains(set2, Rat(1)));      // midpoint
    CHECK(contains(set2, R("1/2")));    // midpoint - eta, eta = 2/4
    CHECK(contains(set2, R("3/2")));    // midpoint + eta

    // The deviation the general lower-bound proof uses (to a candidate) is
    // always in the witness set.
    Instance i1 = build_fixture({Fixture::ScGeneralLowerI1, Rat(1, 1000), 1, 1, false});
    CHECK(contains(pivotal_misreports(i1, 1), Rat(1)));

    // All coordinates coincide: eta defaults to 1.
    Instance lumped = make_inst({{"0"}}, {"0", "0"});
    auto set3 = pivotal_misreports(lumped, 0);
    CHECK(contains(set3, Rat(-1)));
    CHECK(contains(set3, Rat(1)));

    CHECK_THROWS_AS(pivotal_misreports(inst, 9), UsageError);
}

TEST_CASE("check_sp finds the slot-freeing deviation against leftmost-priority") {
    // Candidates {-1, 0, 1}, both-approving agents at -eps and eps. Truthful
    // run: w1 = t(-eps) = 0, which occupies the right agent's top slot, so
    // w2 = s(eps) = 1; the left agent pays eps + (1+eps). Misreporting -1
    // drags w1 onto -1 but frees slot 0 for w2: she pays (1-eps) + eps = 1,
    // a strict gain of 2*eps. The exhaustive pivotal enumeration certifies
    // the deviation; the leftmost-anchored placement is not strategyproof.
    const Rat eps(1, 1000);
    Instance i1 = build_fixture({Fixture::McHomLowerI1, eps, 1, 1, false});
    const auto res = check_sp(MechanismId::leftmost_priority(), i1);
    REQUIRE(!res.violations.empty());
    bool found_pinned = false;
    for (const SPViolation& v : res.violations) {
        CHECK(v.agent == 0); // the right agent has no profitable deviation
        CHECK(v.deviated_cost < v.true_cost);
        // Every violation re-verifies against a fresh mechanism run.
        Instance dev = i1;
        dev.agents[v.agent].position = v.misreport;
        const auto rerun = run_leftmost_priority(dev);
        CHECK(rerun.solution == v.outcome_after);
        CHECK(agent_cost(i1, v.agent, rerun.solution) == v.deviated_cost);
        if (v.misreport == Rat(-1)) {
            found_pinned = true;
            CHECK(v.true_cost == Rat(1) + Rat(2) * eps);
            CHECK(v.deviated_cost == Rat(1));
            CHECK(v.outcome_before == Solution{1, 2});
            CHECK(v.outcome_after == Solution{0, 1});
        }
    }
    CHECK(found_pinned);
}

TEST_CASE("check_sp finds the same coupling against the alpha-statistic") {
    // At n = 2 the ranks are (1, 2): the leftmost anchors w1, the rightmost
    // w2. Identical geometry, identical deviation.
    Instance inst = make_inst({{"-1/1000"}, {"1/1000"}}, {"-1", "0", "1"});
    const auto res = check_sp(MechanismId::alpha_stat(), inst);
    REQUIRE(!res.violations.empty());
    for (const SPViolation& v : res.violations) CHECK(v.agent == 0);
}

TEST_CASE("check_sp finds the median-shift deviation against pmm") {
    // The median agent of N2 sits at 1/8 with top slot -1/2, contested by
    // m1; priority falls to F1 and she is pushed to s(m2) = 1. Exaggerating
    // far left installs a new median whose (t, s) pair re-bases the S2 vote,
    // the priority flips to F2, and F2 lands on -1/2: cost 7/8 -> 5/8.
    Instance inst = make_inst({{"2/3", true, true},
                               {"-7/10", true, false},
                               {"3/8", false, true},
                               {"-1", false, true},
                               {"1/8", false, true},
                               {"-3/8", true, true},
                               {"-7/6", true, false},
                               {"2/9", true, true}},
                              {"1", "-1/2", "-8/5"});
    const auto truth = run_pmm(inst);
    CHECK(truth.solution == Solution{1, 0});
    CHECK(agent_cost(inst, 4, truth.solution) == Rat(7, 8));

    Instance dev = inst;
    dev.agents[4].position = Rat(-34, 5);
    const auto moved = run_pmm(dev);
    CHECK(moved.solution == Solution{2, 1});
    CHECK(agent_cost(inst, 4, moved.solution) == Rat(5, 8));

    const auto res = check_sp(MechanismId::pmm(), inst);
    CHECK(!res.violations.empty());
}

TEST_CASE("check_sp certifies vote-for-priority and catches the broken mechanism") {
    // Vote-for-priority separates the anchors from the coupled facility, so
    // the slot-freeing deviation has no bite; spot-check a fuzz sample.
    const GeneratorSpec gen = GeneratorSpec::parse("singleton-prefs?n=6&m=5");
    for (std::uint64_t t = 0; t < 150; ++t) {
        const Instance inst =
            generate_for_mechanism(gen, MechanismId::vote_for_priority(), mix_seed(77, t));
        CHECK(check_sp(MechanismId::vote_for_priority(), inst).violations.empty());
    }

    // Mean-based placement is manipulable.
    Instance bait = make_inst({{"0"}, {"10"}}, {"0", "6", "10"});
    auto res = check_sp(MechanismId::broken_mean(), bait);
    CHECK(!res.violations.empty());
    // Every reported violation re-verifies against a fresh mechanism run.
    for (const SPViolation& v : res.violations) {
        Instance dev = bait;
        dev.agents[v.agent].position = v.misreport;
        const MechanismOutcome rerun = run_mechanism(MechanismId::broken_mean(), dev);
        CHECK(rerun.solution == v.outcome_after);
        CHECK(agent_cost(bait, v.agent, rerun.solution) == v.deviated_cost);
        CHECK(v.deviated_cost < v.true_cost);
        CHECK(agent_cost(bait, v.agent, v.outcome_before) == v.true_cost);
    }

    // Agents already at cost zero never appear in violation lists.
    Instance zeroed = make_inst({{"0", true, false}, {"5", false, true}}, {"0", "5"});
    for (const auto& v : check_sp(MechanismId::pmm(), zeroed).violations) CHECK(v.agent != 0);

    // Domain error on the true profile propagates.
    Instance hetero = make_inst({{"0", true, false}, {"1", true, true}}, {"0", "1"});
    CHECK_THROWS_AS(check_sp(MechanismId::median2(), hetero), DomainError);
}

TEST_CASE("ratio computes the exact mechanism-over-optimum quotient") {
    Instance tight = build_fixture({Fixture::MedianTight, Rat(1, 1000), 1, 1, false});
    const RatioResult r = ratio(MechanismId::median2(), tight, Objective::SocialCost);
    CHECK_FALSE(r.infinite);
    CHECK(r.ratio == R("1498/501")); // (3 - 4eps) / (1 + 2eps) at eps = 1/1000
    CHECK(r.mech_value == R("749/250"));
    CHECK(r.opt_value == R("501/500"));

    // A unique feasible unordered pair: ratio 1 regardless of mechanism.
    Instance pair = make_inst({{"1"}, {"9"}}, {"0", "10"});
    CHECK(ratio(MechanismId::leftmost_priority(), pair, Objective::MaxCost).ratio == Rat(1));

    Instance vfp = build_fixture({Fixture::VfpExample, Rat(1, 1000), 1, 1, false});
    CHECK(ratio(MechanismId::naive_left_right(), vfp, Objective::MaxCost).ratio == R("5000/1001"));

    // Zero optimum with positive mechanism value: infinite, first class.
    Instance split = make_inst({{"0", true, false}, {"100", false, true}},
                               {"0", "100", "50", "1201/24"});
    const RatioResult inf = ratio(MechanismId::broken_mean(), split, Objective::SocialCost);
    CHECK(inf.infinite);
    CHECK(inf.opt_value == Rat(0));
    CHECK(inf.mech_value > Rat(0));
    CHECK(compare_ratio_to_bound(inf, BoundExpr::rational(Rat(1000))) == 1);

    // Both zero: ratio is exactly 1.
    Instance covered = make_inst({{"1", true, false}, {"7", false, true}}, {"1", "7"});
    const RatioResult both0 = ratio(MechanismId::pmm(), covered, Objective::MaxCost);
    CHECK_FALSE(both0.infinite);
    CHECK(both0.ratio == Rat(1));
}

TEST_CASE("ratio results compare exactly against irrational bounds") {
    auto finite = [](const char* v) {
        return RatioResult::from_values(R(v), Rat(1));
    };
    CHECK(compare_ratio_to_bound(finite("241/100"), BoundExpr::one_plus_sqrt2()) == -1);
    CHECK(compare_ratio_to_bound(finite("3"), BoundExpr::rational(Rat(3))) == 0);
    CHECK(compare_ratio_to_bound(finite("17/7"), BoundExpr::one_plus_sqrt2()) == 1);
}

TEST_CASE("sweep is deterministic, bounded and reproducible") {
    const GeneratorSpec hom = GeneratorSpec::parse("uniform-homogeneous?n=6&m=5");
    const SweepReport a = sweep(MechanismId::alpha_stat(), Objective::SocialCost, hom, 250, 11);
    const SweepReport b = sweep(MechanismId::alpha_stat(), Objective::SocialCost, hom, 250, 11);
    CHECK(sweep_report_json(a).dump() == sweep_report_json(b).dump());
    CHECK(sweep_csv(a) == sweep_csv(b));
    CHECK(a.max_defined);
    CHECK(compare_ratio_to_bound(a.max_ratio, BoundExpr::one_plus_sqrt2()) <= 0);
    // The argmax instance reproduces its ratio on re-evaluation.
    const RatioResult again =
        ratio(MechanismId::alpha_stat(), a.argmax_instance, Objective::SocialCost);
    CHECK(again.ratio == a.max_ratio.ratio);
    // Histogram counts all finite trials.
    std::size_t counted = a.histogram_overflow + a.infinite_trials;
    for (const auto& bucket : a.histogram) counted += bucket.count;
    CHECK(counted == a.trials);

    const SweepReport vac = sweep(MechanismId::pmm(), Objective::SocialCost,
                                  GeneratorSpec::parse("uniform-general"), 0, 1);
    CHECK_FALSE(vac.max_defined);
    CHECK(vac.trial_log.empty());

    CHECK_THROWS_AS(sweep(MechanismId::median2(), Objective::SocialCost,
                          GeneratorSpec::parse("singleton-prefs"), 5, 1),
                    ConfigError);
}

TEST_CASE("sweeps respect the mechanism guarantees on small samples") {
    struct Case {
        MechanismId mech;
        Objective obj;
        const char* gen;
        BoundExpr bound;
    };
    const std::vector<Case> cases = {
        {MechanismId::median2(), Objective::SocialCost, "uniform-homogeneous?n=6&m=5",
         BoundExpr::rational(Rat(3))},
        {MechanismId::pmm(), Objective::SocialCost, "uniform-general?n=6&m=5",
         BoundExpr::rational(Rat(3))},
        {MechanismId::leftmost_priority(), Objective::MaxCost, "uniform-homogeneous?n=6&m=5",
         BoundExpr::rational(Rat(2))},
        {MechanismId::general_max(), Objective::MaxCost, "singleton-prefs?n=6&m=5",
         BoundExpr::rational(Rat(3))},
    };
    for (const auto& c : cases) {
        const SweepReport rep = sweep(c.mech, c.obj, GeneratorSpec::parse(c.gen), 400, 23);
        REQUIRE(rep.standard_max_defined);
        CHECK(compare_ratio_to_bound(rep.max_ratio_standard, c.bound) <= 0);
    }
}

TEST_CASE("results are independent of the worker cap") {
    // FACMECH_THREADS only changes scheduling; reports and violation lists
    // must come back identical.
    const GeneratorSpec gen = GeneratorSpec::parse("uniform-general?n=6&m=5");
    const Instance inst = generate_for_mechanism(gen, MechanismId::broken_mean(), 1234);

    setenv("FACMECH_THREADS", "1", 1);
    const SPCheckResult serial = check_sp(MechanismId::broken_mean(), inst);
    const SweepReport sweep1 =
        sweep(MechanismId::pmm(), Objective::SocialCost, gen, 120, 5);
    setenv("FACMECH_THREADS", "3", 1);
    const SPCheckResult threaded = check_sp(MechanismId::broken_mean(), inst);
    const SweepReport sweep3 =
        sweep(MechanismId::pmm(), Objective::SocialCost, gen, 120, 5);
    unsetenv("FACMECH_THREADS");

    REQUIRE(serial.violations.size() == threaded.violations.size());
    for (std::size_t i = 0; i < serial.violations.size(); ++i) {
        CHECK(serial.violations[i].agent == threaded.violations[i].agent);
        CHECK(serial.violations[i].misreport == threaded.violations[i].misreport);
        CHECK(serial.violations[i].deviated_cost == threaded.violations[i].deviated_cost);
    }
    CHECK(sweep_report_json(sweep1).dump() == sweep_report_json(sweep3).dump());
    CHECK(sweep_csv(sweep1) == sweep_csv(sweep3));
}

TEST_CASE("negative control: the fuzzer flags broken-mean quickly") {
    const GeneratorSpec gen = GeneratorSpec::parse("uniform-general?n=6&m=5");
    std::size_t violations = 0;
    for (std::uint64_t t = 0; t < 300 && violations == 0; ++t) {
        const Instance inst = generate_for_mechanism(gen, MechanismId::broken_mean(), mix_seed(3, t));
        violations += check_sp(MechanismId::broken_mean(), inst).violations.size();
    }
    CHECK(violations >= 1);
}

TEST_CASE("fixture ratios match their oracle-derived closed forms") {
    for (const Rat& e : {Rat(1, 10), Rat(1, 100), Rat(1, 1000), Rat(1, 10000)}) {
        CAPTURE(e.str());
        Instance tight = build_fixture({Fixture::MedianTight, e, 1, 1, false});
        CHECK(ratio(MechanismId::median2(), tight, Objective::SocialCost).ratio ==
              (Rat(3) - Rat(4) * e) / (Rat(1) + Rat(2) * e));

        Instance vfp = build_fixture({Fixture::VfpExample, e, 1, 1, false});
        CHECK(ratio(MechanismId::vote_for_priority(), vfp, Objective::MaxCost).ratio ==
              (Rat(3) + e) / (Rat(1) + e));
        CHECK(ratio(MechanismId::naive_left_right(), vfp, Objective::MaxCost).ratio ==
              Rat(5) / (Rat(1) + e));

        // Median-first on the priority counterexample places (0, 2): the
        // cluster pays 1-eps each, the x agents at 2 pay 2, all of N2 pays
        // 2, totalling 7x+3-(x+1)eps; optimum (2, 0) costs (x+1)(1+eps).
        for (unsigned long x : {1ul, 2ul, 100ul}) {
            Instance ex1 = build_fixture({Fixture::PmmExample, e, 1, x, false});
            const Rat xr(static_cast<long>(x));
            const Rat expected = ((Rat(7) * xr + Rat(3)) - (xr + Rat(1)) * e) /
                                 ((xr + Rat(1)) * (Rat(1) + e));
            CHECK(ratio(MechanismId::naive_median_f1(), ex1, Objective::SocialCost).ratio ==
                  expected);
        }
    }
}

TEST_CASE("lower-bound fixture ratios grow toward the bound as eps shrinks") {
    const std::vector<Rat> eps_seq = {Rat(1, 10), Rat(1, 100), Rat(1, 1000), Rat(1, 10000)};

    auto check_monotone = [&](auto make_ratio, const BoundExpr& bound) {
        Rat prev(-1);
        for (const Rat& e : eps_seq) {
            const Rat r = make_ratio(e);
            CHECK(r >= prev);
            CHECK(bound.compare(r) <= 0);
            prev = r;
        }
    };

    check_monotone(
        [](const Rat& e) {
            Instance inst = build_fixture({Fixture::MedianTight, e, 1, 1, false});
            return ratio(MechanismId::median2(), inst, Objective::SocialCost).ratio;
        },
        BoundExpr::rational(Rat(3)));

    check_monotone(
        [](const Rat& e) {
            Instance inst = build_fixture({Fixture::VfpExample, e, 1, 1, false});
            return ratio(MechanismId::naive_left_right(), inst, Objective::MaxCost).ratio;
        },
        BoundExpr::rational(Rat(5)));

    check_monotone(
        [](const Rat& e) {
            Instance inst = build_fixture({Fixture::PmmExample, e, 1, 100, false});
            return ratio(MechanismId::naive_median_f1(), inst, Objective::SocialCost).ratio;
        },
        BoundExpr::rational(Rat(7)));

    // Forced outcomes on the general lower-bound instances.
    check_monotone(
        [](const Rat& e) {
            Instance inst = build_fixture({Fixture::McGeneralLowerI2, e, 1, 1, false});
            return objective_value(inst, {1, 0}, Objective::MaxCost) /
                   optimal(inst, Objective::MaxCost).second;
        },
        BoundExpr::rational(Rat(3)));

    check_monotone(
        [](const Rat& e) {
            Instance inst = build_fixture({Fixture::ScGeneralLowerI2, e, 1, 1, false});
            return objective_value(inst, {1, 0}, Objective::SocialCost) /
                   optimal(inst, Objective::SocialCost).second;
        },
        BoundExpr::rational(Rat(3)));
}
