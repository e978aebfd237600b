#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facmech/costs.hpp"
#include "facmech/model.hpp"

namespace facmech {

/// The alpha parameter of the alpha-statistic mechanism: a rational in
/// [0, 1/2], or the exact irrational sqrt(2)-1. Rank computations with the
/// irrational value are resolved by integer square comparisons, never by
/// floating point.
struct AlphaParam {
    enum class Kind { Rational, Sqrt2Minus1 };

    Kind kind = Kind::Sqrt2Minus1;
    Rat value; // meaningful only for Kind::Rational

    static AlphaParam sqrt2_minus_1() { return AlphaParam{}; }
    static AlphaParam rational(Rat v);

    /// Accepts "sqrt2-1" or a rational string in [0, 1/2].
    static AlphaParam parse(std::string_view text);

    std::string str() const;

    friend bool operator==(const AlphaParam& a, const AlphaParam& b) {
        return a.kind == b.kind && (a.kind == Kind::Sqrt2Minus1 || a.value == b.value);
    }
};

struct MechanismId {
    enum class Kind {
        MedianTwo,
        AlphaStatistic,
        ProportionalMajorityMedian,
        LeftmostPriority,
        VoteForPriority,
        GeneralMaxDispatch,
        NaiveMedianF1First,
        NaiveLeftThenRight,
        BrokenMean, // deliberately manipulable; negative control for the SP fuzzer
    };

    Kind kind = Kind::GeneralMaxDispatch;
    AlphaParam alpha{}; // used by AlphaStatistic only

    /// Stable CLI identifier: median2, alpha-stat, pmm, leftmost-priority,
    /// vote-for-priority, general-max, naive-median-f1, naive-left-right,
    /// broken-mean.
    std::string name() const;
    static MechanismId parse(std::string_view name,
                             std::optional<AlphaParam> alpha = std::nullopt);

    static MechanismId median2() { return {Kind::MedianTwo, {}}; }
    static MechanismId alpha_stat(AlphaParam a = AlphaParam::sqrt2_minus_1()) {
        return {Kind::AlphaStatistic, a};
    }
    static MechanismId pmm() { return {Kind::ProportionalMajorityMedian, {}}; }
    static MechanismId leftmost_priority() { return {Kind::LeftmostPriority, {}}; }
    static MechanismId vote_for_priority() { return {Kind::VoteForPriority, {}}; }
    static MechanismId general_max() { return {Kind::GeneralMaxDispatch, {}}; }
    static MechanismId naive_median_f1() { return {Kind::NaiveMedianF1First, {}}; }
    static MechanismId naive_left_right() { return {Kind::NaiveLeftThenRight, {}}; }
    static MechanismId broken_mean() { return {Kind::BrokenMean, {}}; }
};

struct TraceEntry {
    std::string key;
    std::string value;

    friend bool operator==(const TraceEntry& a, const TraceEntry& b) {
        return a.key == b.key && a.value == b.value;
    }
};

using Trace = std::vector<TraceEntry>;

/// First value recorded under `key`, or nullptr.
const std::string* trace_find(const Trace& trace, std::string_view key);

struct MechanismOutcome {
    Solution solution;
    Trace trace; // fully determined by the instance
};

/// 1-based ranks (i, j) of the agents whose nearest candidates the
/// alpha-statistic targets: i = max(1, ceil(alpha*n)), j = ceil((1-alpha)*n).
/// For alpha <= 1/2 the ranks satisfy i <= j; they coincide exactly when
/// ceil(alpha*n) = ceil((1-alpha)*n), in which case run_alpha_statistic
/// falls back to the second-closest slot of the shared agent (the same
/// outcome the agent-duplication device produces on such instances).
std::pair<unsigned long, unsigned long> alpha_index(unsigned long n, const AlphaParam& alpha);

MechanismOutcome run_median_two(const Instance& inst);
MechanismOutcome run_alpha_statistic(const Instance& inst, const AlphaParam& alpha);
MechanismOutcome run_pmm(const Instance& inst);
MechanismOutcome run_leftmost_priority(const Instance& inst);
MechanismOutcome run_vote_for_priority(const Instance& inst);
MechanismOutcome run_general_max_dispatch(const Instance& inst);

enum class NaiveKind { MedianF1First, LeftThenRight };
MechanismOutcome run_naive_baseline(const Instance& inst, NaiveKind kind);

MechanismOutcome run_broken_mean(const Instance& inst);

/// Dispatch by MechanismId. Throws DomainError if the instance lies outside
/// the mechanism's domain.
MechanismOutcome run_mechanism(const MechanismId& mech, const Instance& inst);

/// True iff `inst` satisfies the mechanism's domain preconditions.
bool instance_in_domain(const MechanismId& mech, const Instance& inst);

} // namespace facmech
