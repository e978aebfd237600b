#include "facmech/mechanisms.hpp"

#include <algorithm>

namespace facmech {

namespace {

std::string idx(std::size_t v) {
    return std::to_string(v);
}

// Lowest agent index attaining the minimum position in `group`.
std::size_t leftmost_of(const Instance& inst, const std::vector<std::size_t>& group) {
    std::size_t best = group.front();
    for (std::size_t i : group) {
        const Rat& p = inst.agents[i].position;
        const Rat& bp = inst.agents[best].position;
        if (p < bp || (p == bp && i < best)) best = i;
    }
    return best;
}

// Lowest agent index attaining the maximum position in `group`.
std::size_t rightmost_of(const Instance& inst, const std::vector<std::size_t>& group) {
    std::size_t best = group.front();
    for (std::size_t i : group) {
        const Rat& p = inst.agents[i].position;
        const Rat& bp = inst.agents[best].position;
        if (p > bp || (p == bp && i < best)) best = i;
    }
    return best;
}

// Slot nearest `from`'s coordinate among slots != from, ties to lowest index.
std::size_t nearest_other_slot(const Instance& inst, std::size_t from) {
    std::size_t best = from == 0 ? 1 : 0;
    Rat bd = distance(inst.candidates[best], inst.candidates[from]);
    for (std::size_t c = best + 1; c < inst.m(); ++c) {
        if (c == from) continue;
        Rat d = distance(inst.candidates[c], inst.candidates[from]);
        if (d < bd) {
            best = c;
            bd = d;
        }
    }
    return best;
}

// Places the second facility at the slot nearest `agent` that is still
// available: t(agent) unless taken by w1, else s(agent).
std::size_t place_available(const Instance& inst, std::size_t agent, std::size_t w1) {
    auto [t, s] = nearest_candidates(inst, inst.agents[agent].position);
    return t != w1 ? t : s;
}

void require_homogeneous(const Instance& inst, const char* mech) {
    if (!inst.homogeneous())
        throw DomainError(std::string(mech) +
                          " requires a homogeneous instance (every agent approves both facilities)");
}

} // namespace

const std::string* trace_find(const Trace& trace, std::string_view key) {
    for (const auto& e : trace)
        if (e.key == key) return &e.value;
    return nullptr;
}

AlphaParam AlphaParam::rational(Rat v) {
    if (v.sign() < 0 || v > Rat(1, 2))
        throw ConfigError("alpha must lie in [0, 1/2], got " + v.str());
    return AlphaParam{Kind::Rational, std::move(v)};
}

AlphaParam AlphaParam::parse(std::string_view text) {
    if (text == "sqrt2-1") return sqrt2_minus_1();
    Rat v;
    try {
        v = Rat::parse(text);
    } catch (const ParseError&) {
        throw ConfigError("alpha must be 'sqrt2-1' or a rational p/q, got '" + std::string(text) + "'");
    }
    return rational(std::move(v));
}

std::string AlphaParam::str() const {
    return kind == Kind::Sqrt2Minus1 ? "sqrt2-1" : value.str();
}

std::string MechanismId::name() const {
    switch (kind) {
    case Kind::MedianTwo: return "median2";
    case Kind::AlphaStatistic: return "alpha-stat";
    case Kind::ProportionalMajorityMedian: return "pmm";
    case Kind::LeftmostPriority: return "leftmost-priority";
    case Kind::VoteForPriority: return "vote-for-priority";
    case Kind::GeneralMaxDispatch: return "general-max";
    case Kind::NaiveMedianF1First: return "naive-median-f1";
    case Kind::NaiveLeftThenRight: return "naive-left-right";
    case Kind::BrokenMean: return "broken-mean";
    }
    return "?";
}

MechanismId MechanismId::parse(std::string_view name, std::optional<AlphaParam> alpha) {
    MechanismId id;
    if (name == "median2") id.kind = Kind::MedianTwo;
    else if (name == "alpha-stat") id.kind = Kind::AlphaStatistic;
    else if (name == "pmm") id.kind = Kind::ProportionalMajorityMedian;
    else if (name == "leftmost-priority") id.kind = Kind::LeftmostPriority;
    else if (name == "vote-for-priority") id.kind = Kind::VoteForPriority;
    else if (name == "general-max") id.kind = Kind::GeneralMaxDispatch;
    else if (name == "naive-median-f1") id.kind = Kind::NaiveMedianF1First;
    else if (name == "naive-left-right") id.kind = Kind::NaiveLeftThenRight;
    else if (name == "broken-mean") id.kind = Kind::BrokenMean;
    else throw ConfigError("unknown mechanism: '" + std::string(name) + "'");
    if (alpha) id.alpha = *alpha;
    return id;
}

std::pair<unsigned long, unsigned long> alpha_index(unsigned long n, const AlphaParam& alpha) {
    if (n < 1) throw UsageError("alpha_index requires n >= 1");
    mpz_class i, j;
    const mpz_class nz(static_cast<unsigned long>(n));
    if (alpha.kind == AlphaParam::Kind::Sqrt2Minus1) {
        // floor((sqrt(2)-1)*n) = isqrt(2*n^2) - n; alpha*n is irrational, so
        // ceil = floor + 1.
        mpz_class r;
        mpz_class two_n2 = 2 * nz * nz;
        mpz_sqrt(r.get_mpz_t(), two_n2.get_mpz_t());
        i = r - nz + 1;
        j = 2 * nz - r; // ceil((1-alpha)*n) = n - floor(alpha*n)
    } else {
        const mpz_class p = alpha.value.num();
        const mpz_class q = alpha.value.den();
        mpz_cdiv_q(i.get_mpz_t(), mpz_class(p * nz).get_mpz_t(), q.get_mpz_t());
        if (i < 1) i = 1;
        mpz_cdiv_q(j.get_mpz_t(), mpz_class((q - p) * nz).get_mpz_t(), q.get_mpz_t());
    }
    return {i.get_ui(), j.get_ui()};
}

MechanismOutcome run_median_two(const Instance& inst) {
    inst.validate();
    require_homogeneous(inst, "median2");
    const std::size_t m = median_agent(inst, 1);
    auto [t, s] = nearest_candidates(inst, inst.agents[m].position);
    MechanismOutcome out;
    out.solution = {t, s};
    out.trace = {{"mechanism", "median2"},
                 {"median_agent", idx(m)},
                 {"w1", idx(t)},
                 {"w2", idx(s)}};
    return out;
}

MechanismOutcome run_alpha_statistic(const Instance& inst, const AlphaParam& alpha) {
    inst.validate();
    require_homogeneous(inst, "alpha-stat");
    auto all = inst.approvers(1);
    auto sorted = sort_by_position(inst, std::move(all));
    auto [i_rank, j_rank] = alpha_index(inst.n(), alpha);
    const std::size_t ai = sorted[i_rank - 1];
    const std::size_t aj = sorted[j_rank - 1];
    auto [ti, si] = nearest_candidates(inst, inst.agents[ai].position);
    const std::size_t w1 = ti;
    const std::size_t w2 = place_available(inst, aj, w1);
    MechanismOutcome out;
    out.solution = {w1, w2};
    out.trace = {{"mechanism", "alpha-stat"},
                 {"alpha", alpha.str()},
                 {"i_rank", idx(i_rank)},
                 {"j_rank", idx(j_rank)},
                 {"agent_i", idx(ai)},
                 {"agent_j", idx(aj)},
                 {"rank_collision", i_rank == j_rank ? "1" : "0"},
                 {"w1", idx(w1)},
                 {"w2", idx(w2)}};
    return out;
}

MechanismOutcome run_pmm(const Instance& inst) {
    inst.validate();
    const auto n1 = inst.approvers(1);
    const auto n2 = inst.approvers(2);
    if (n1.empty() || n2.empty())
        throw DomainError("pmm requires both N1 and N2 nonempty");

    const std::size_t m1 = median_agent(inst, 1);
    const std::size_t m2 = median_agent(inst, 2);
    auto [t1, s1] = nearest_candidates(inst, inst.agents[m1].position);
    auto [t2, s2] = nearest_candidates(inst, inst.agents[m2].position);

    // S_j: agents of N_j weakly closer to t(m_j) than to s(m_j).
    auto count_weakly_closer = [&](const std::vector<std::size_t>& group, std::size_t t,
                                   std::size_t s) {
        unsigned long long count = 0;
        for (std::size_t i : group) {
            const Rat& x = inst.agents[i].position;
            if (distance(x, inst.candidates[t]) <= distance(x, inst.candidates[s])) ++count;
        }
        return count;
    };
    const unsigned long long s1_count = count_weakly_closer(n1, t1, s1);
    const unsigned long long s2_count = count_weakly_closer(n2, t2, s2);

    // Priority by exact ratio comparison |S1|/|N1| vs |S2|/|N2|; ties go to
    // the facility approved by more agents, then to F1.
    const unsigned long long lhs = s1_count * n2.size();
    const unsigned long long rhs = s2_count * n1.size();
    int priority;
    if (lhs > rhs) priority = 1;
    else if (lhs < rhs) priority = 2;
    else if (n1.size() >= n2.size()) priority = 1;
    else priority = 2;

    std::size_t w1, w2;
    if (priority == 1) {
        w1 = t1;
        w2 = t2 != w1 ? t2 : s2;
    } else {
        w2 = t2;
        w1 = t1 != w2 ? t1 : s1;
    }
    MechanismOutcome out;
    out.solution = {w1, w2};
    out.trace = {{"mechanism", "pmm"},
                 {"m1", idx(m1)},
                 {"m2", idx(m2)},
                 {"s1_count", std::to_string(s1_count)},
                 {"n1_count", idx(n1.size())},
                 {"s2_count", std::to_string(s2_count)},
                 {"n2_count", idx(n2.size())},
                 {"priority", std::to_string(priority)},
                 {"w1", idx(w1)},
                 {"w2", idx(w2)}};
    return out;
}

MechanismOutcome run_leftmost_priority(const Instance& inst) {
    inst.validate();
    std::vector<std::size_t> both;
    for (std::size_t i = 0; i < inst.n(); ++i)
        if (inst.agents[i].pref.both()) both.push_back(i);
    if (both.empty())
        throw DomainError("leftmost-priority requires at least one agent approving both facilities");

    const std::size_t l12 = leftmost_of(inst, both);
    const std::size_t r12 = rightmost_of(inst, both);
    auto [t, s] = nearest_candidates(inst, inst.agents[l12].position);
    const std::size_t w1 = t;
    const std::size_t w2 = place_available(inst, r12, w1);
    MechanismOutcome out;
    out.solution = {w1, w2};
    out.trace = {{"mechanism", "leftmost-priority"},
                 {"l12", idx(l12)},
                 {"r12", idx(r12)},
                 {"w1", idx(w1)},
                 {"w2", idx(w2)}};
    return out;
}

MechanismOutcome run_vote_for_priority(const Instance& inst) {
    inst.validate();
    if (inst.has_both_approver())
        throw DomainError("vote-for-priority requires N1 and N2 disjoint (singleton preferences)");
    const auto n1 = inst.approvers(1);
    const auto n2 = inst.approvers(2);
    if (n1.empty() || n2.empty())
        throw DomainError("vote-for-priority requires both N1 and N2 nonempty");

    const std::size_t l1 = leftmost_of(inst, n1);
    auto [t1, s1] = nearest_candidates(inst, inst.agents[l1].position);
    const std::size_t w1 = t1;
    const Rat& w1c = inst.candidates[w1];

    // L/R: nearest slots strictly left/right of w1's coordinate, ties by
    // lowest slot index. Slots at the same coordinate as w1 are neither.
    std::optional<std::size_t> left, right;
    for (std::size_t c = 0; c < inst.m(); ++c) {
        const Rat& x = inst.candidates[c];
        if (x < w1c) {
            if (!left || x > inst.candidates[*left]) left = c;
        } else if (x > w1c) {
            if (!right || x < inst.candidates[*right]) right = c;
        }
    }

    const std::size_t l2 = leftmost_of(inst, n2);
    const std::size_t r2 = rightmost_of(inst, n2);

    // Cases 1 and 2 compare distances to both L and R, so they are
    // unsatisfiable when either side is missing; "closer" is strict, sending
    // midpoint ties to case 3.
    int vfp_case = 3;
    if (left && right) {
        const Rat& lc = inst.candidates[*left];
        const Rat& rc = inst.candidates[*right];
        auto closer_to_left = [&](std::size_t agent) {
            const Rat& x = inst.agents[agent].position;
            return distance(x, lc) < distance(x, rc);
        };
        auto closer_to_right = [&](std::size_t agent) {
            const Rat& x = inst.agents[agent].position;
            return distance(x, rc) < distance(x, lc);
        };
        if (closer_to_left(l2) && closer_to_left(r2)) vfp_case = 1;
        else if (closer_to_right(l2) && closer_to_right(r2)) vfp_case = 2;
    }

    std::size_t w2;
    if (vfp_case == 1) {
        w2 = place_available(inst, r2, w1);
    } else if (vfp_case == 2) {
        w2 = place_available(inst, l2, w1);
    } else if (left && right) {
        w2 = distance(inst.candidates[*left], w1c) <= distance(inst.candidates[*right], w1c)
                 ? *left
                 : *right;
    } else if (left) {
        w2 = *left;
    } else if (right) {
        w2 = *right;
    } else {
        // Every other slot duplicates w1's coordinate; take the nearest one.
        w2 = nearest_other_slot(inst, w1);
    }

    MechanismOutcome out;
    out.solution = {w1, w2};
    out.trace = {{"mechanism", "vote-for-priority"},
                 {"l1", idx(l1)},
                 {"l2", idx(l2)},
                 {"r2", idx(r2)},
                 {"L", left ? idx(*left) : "none"},
                 {"R", right ? idx(*right) : "none"},
                 {"case", std::to_string(vfp_case)}};
    if (!left || !right) {
        out.trace.push_back({"missing_side", !left && !right ? "both" : (!left ? "left" : "right")});
    }
    out.trace.push_back({"w1", idx(w1)});
    out.trace.push_back({"w2", idx(w2)});
    return out;
}

MechanismOutcome run_general_max_dispatch(const Instance& inst) {
    inst.validate();
    const auto n1 = inst.approvers(1);
    const auto n2 = inst.approvers(2);
    MechanismOutcome out;
    if (inst.has_both_approver()) {
        out = run_leftmost_priority(inst);
        out.trace.insert(out.trace.begin(), {"branch", "leftmost-priority"});
    } else if (!n1.empty() && !n2.empty()) {
        out = run_vote_for_priority(inst);
        out.trace.insert(out.trace.begin(), {"branch", "vote-for-priority"});
    } else if (n2.empty()) {
        // Degenerate: nobody approves F2, so its slot is cost-irrelevant.
        const std::size_t l1 = leftmost_of(inst, n1);
        auto [t, s] = nearest_candidates(inst, inst.agents[l1].position);
        out.solution = {t, nearest_other_slot(inst, t)};
        out.trace = {{"branch", "only-f1"},
                     {"l1", idx(l1)},
                     {"w1", idx(out.solution.c1)},
                     {"w2", idx(out.solution.c2)}};
    } else {
        const std::size_t l2 = leftmost_of(inst, n2);
        auto [t, s] = nearest_candidates(inst, inst.agents[l2].position);
        out.solution = {nearest_other_slot(inst, t), t};
        out.trace = {{"branch", "only-f2"},
                     {"l2", idx(l2)},
                     {"w1", idx(out.solution.c1)},
                     {"w2", idx(out.solution.c2)}};
    }
    out.trace.insert(out.trace.begin(), {"mechanism", "general-max"});
    return out;
}

MechanismOutcome run_naive_baseline(const Instance& inst, NaiveKind kind) {
    inst.validate();
    const auto n1 = inst.approvers(1);
    const auto n2 = inst.approvers(2);
    if (n1.empty() || n2.empty())
        throw DomainError("naive baselines require both N1 and N2 nonempty");

    MechanismOutcome out;
    if (kind == NaiveKind::MedianF1First) {
        const std::size_t m1 = median_agent(inst, 1);
        const std::size_t m2 = median_agent(inst, 2);
        auto [t1, s1] = nearest_candidates(inst, inst.agents[m1].position);
        const std::size_t w1 = t1;
        const std::size_t w2 = place_available(inst, m2, w1);
        out.solution = {w1, w2};
        out.trace = {{"mechanism", "naive-median-f1"},
                     {"m1", idx(m1)},
                     {"m2", idx(m2)},
                     {"w1", idx(w1)},
                     {"w2", idx(w2)}};
    } else {
        const std::size_t l1 = leftmost_of(inst, n1);
        const std::size_t r2 = rightmost_of(inst, n2);
        auto [t1, s1] = nearest_candidates(inst, inst.agents[l1].position);
        const std::size_t w1 = t1;
        const std::size_t w2 = place_available(inst, r2, w1);
        out.solution = {w1, w2};
        out.trace = {{"mechanism", "naive-left-right"},
                     {"l1", idx(l1)},
                     {"r2", idx(r2)},
                     {"w1", idx(w1)},
                     {"w2", idx(w2)}};
    }
    return out;
}

MechanismOutcome run_broken_mean(const Instance& inst) {
    inst.validate();
    Rat mean;
    for (const auto& a : inst.agents) mean += a.position;
    mean /= Rat(static_cast<long>(inst.n()));
    auto [t, s] = nearest_candidates(inst, mean);
    MechanismOutcome out;
    out.solution = {t, s};
    out.trace = {{"mechanism", "broken-mean"},
                 {"mean", mean.str()},
                 {"w1", idx(t)},
                 {"w2", idx(s)}};
    return out;
}

MechanismOutcome run_mechanism(const MechanismId& mech, const Instance& inst) {
    switch (mech.kind) {
    case MechanismId::Kind::MedianTwo: return run_median_two(inst);
    case MechanismId::Kind::AlphaStatistic: return run_alpha_statistic(inst, mech.alpha);
    case MechanismId::Kind::ProportionalMajorityMedian: return run_pmm(inst);
    case MechanismId::Kind::LeftmostPriority: return run_leftmost_priority(inst);
    case MechanismId::Kind::VoteForPriority: return run_vote_for_priority(inst);
    case MechanismId::Kind::GeneralMaxDispatch: return run_general_max_dispatch(inst);
    case MechanismId::Kind::NaiveMedianF1First: return run_naive_baseline(inst, NaiveKind::MedianF1First);
    case MechanismId::Kind::NaiveLeftThenRight: return run_naive_baseline(inst, NaiveKind::LeftThenRight);
    case MechanismId::Kind::BrokenMean: return run_broken_mean(inst);
    }
    throw UsageError("run_mechanism: bad mechanism id");
}

bool instance_in_domain(const MechanismId& mech, const Instance& inst) {
    if (inst.n() < 1 || inst.m() < 2) return false;
    const bool has_n1 = !inst.approvers(1).empty();
    const bool has_n2 = !inst.approvers(2).empty();
    switch (mech.kind) {
    case MechanismId::Kind::MedianTwo:
    case MechanismId::Kind::AlphaStatistic:
        return inst.homogeneous();
    case MechanismId::Kind::ProportionalMajorityMedian:
    case MechanismId::Kind::NaiveMedianF1First:
    case MechanismId::Kind::NaiveLeftThenRight:
        return has_n1 && has_n2;
    case MechanismId::Kind::LeftmostPriority:
        return inst.has_both_approver();
    case MechanismId::Kind::VoteForPriority:
        return !inst.has_both_approver() && has_n1 && has_n2;
    case MechanismId::Kind::GeneralMaxDispatch:
    case MechanismId::Kind::BrokenMean:
        return true;
    }
    return false;
}

} // namespace facmech
