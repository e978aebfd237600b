#pragma once

#include <cstdint>
#include <vector>

#include "facmech/instance_gen.hpp"
#include "facmech/mechanisms.hpp"

namespace facmech {

/// A certified profitable misreport: deviated_cost < true_cost strictly,
/// both measured at the agent's true position.
struct SPViolation {
    std::size_t agent = 0;
    Rat true_position;
    Rat misreport;
    Rat true_cost;
    Rat deviated_cost;
    Solution outcome_before;
    Solution outcome_after;
};

struct SPCheckResult {
    std::vector<SPViolation> violations; // canonical (agent, misreport) order
    // Deviations that pushed the instance out of the mechanism's domain.
    // Unreachable for the mechanisms here (positions never change approval
    // structure); counted so any occurrence surfaces as an anomaly.
    std::size_t domain_error_deviations = 0;
};

struct RatioResult {
    Rat mech_value;
    Rat opt_value;
    Rat ratio;             // meaningful iff !infinite; 1 when both values are 0
    bool infinite = false; // opt_value = 0 with mech_value > 0

    static RatioResult from_values(Rat mech, Rat opt);
};

/// Finite witness set for unilateral deviations of `agent`: every candidate
/// coordinate, every candidate-pair midpoint, every other agent's position,
/// all of those shifted by +-eta (eta = min positive coordinate gap / 4, or
/// 1 when all coordinates coincide), plus two sentinels beyond the extremes
/// by twice the total span. Mechanism outcomes are piecewise constant in one
/// agent's report with breakpoints only at other-agent positions and
/// candidate midpoints, so this set witnesses every achievable outcome.
std::vector<Rat> pivotal_misreports(const Instance& inst, std::size_t agent);

/// Re-runs the mechanism on every pivotal deviation of every agent and
/// records strict cost decreases. An empty violation list certifies
/// strategyproofness over the witness set. A domain error on the true
/// profile propagates.
SPCheckResult check_sp(const MechanismId& mech, const Instance& inst);

/// Exact mechanism-vs-optimum ratio on one instance.
RatioResult ratio(const MechanismId& mech, const Instance& inst, Objective obj);

/// Three-way comparison of the ratio against a + b*sqrt(2): -1 below,
/// 0 equal, +1 above. Infinite ratios compare above every bound.
int compare_ratio_to_bound(const RatioResult& r, const BoundExpr& bound);

struct HistBucket {
    Rat upper; // bucket holds ratios <= upper (and > previous upper)
    std::size_t count = 0;
};

struct SweepTrial {
    std::size_t n = 0;
    std::size_t m = 0;
    RatioResult ratio;
    bool missing_side = false; // vote-for-priority ran without an L or R slot
};

struct SweepReport {
    MechanismId mechanism;
    Objective objective = Objective::SocialCost;
    GeneratorSpec generator;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    bool max_defined = false; // false for a vacuous sweep (trials = 0)
    RatioResult max_ratio;
    std::size_t argmax_trial = 0;
    Instance argmax_instance;

    // Maximum over trials where vote-for-priority had both neighbor slots;
    // the proven bounds cover exactly that class.
    bool standard_max_defined = false;
    RatioResult max_ratio_standard;
    std::size_t missing_side_trials = 0;

    std::size_t infinite_trials = 0;
    std::vector<HistBucket> histogram;
    std::size_t histogram_overflow = 0; // finite ratios above the last bucket

    std::vector<SweepTrial> trial_log; // per-trial rows for CSV emission
};

/// Deterministic given (mechanism, objective, generator, trials, seed):
/// trial t draws from the stream mix_seed(seed, t). Throws ConfigError on a
/// generator/mechanism domain mismatch before any trial runs.
SweepReport sweep(const MechanismId& mech, Objective obj, const GeneratorSpec& gen,
                  std::size_t trials, std::uint64_t seed);

} // namespace facmech
