#include "facmech/costs.hpp"

#include <algorithm>

namespace facmech {

Rat distance(const Rat& x, const Rat& y) {
    return abs(x - y);
}

namespace {

void check_solution(const Instance& inst, const Solution& s) {
    if (s.c1 >= inst.m() || s.c2 >= inst.m())
        throw UsageError("solution slot index out of range");
    if (s.c1 == s.c2)
        throw UsageError("infeasible solution: c1 == c2 (facilities must occupy distinct slots)");
}

} // namespace

Rat agent_cost(const Instance& inst, std::size_t agent, const Solution& s) {
    if (agent >= inst.n()) throw UsageError("agent index out of range");
    check_solution(inst, s);
    const Agent& a = inst.agents[agent];
    Rat cost;
    if (a.pref.p1) cost += distance(a.position, inst.candidates[s.c1]);
    if (a.pref.p2) cost += distance(a.position, inst.candidates[s.c2]);
    return cost;
}

Rat objective_value(const Instance& inst, const Solution& s, Objective obj) {
    check_solution(inst, s);
    Rat value;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        Rat c = agent_cost(inst, i, s);
        if (obj == Objective::SocialCost)
            value += c;
        else if (c > value)
            value = c;
    }
    return value;
}

std::pair<std::size_t, std::size_t> nearest_candidates(const Instance& inst, const Rat& x) {
    if (inst.m() < 2) throw UsageError("nearest_candidates requires m >= 2");
    std::size_t t = 0;
    Rat dt = distance(inst.candidates[0], x);
    for (std::size_t c = 1; c < inst.m(); ++c) {
        Rat d = distance(inst.candidates[c], x);
        if (d < dt) {
            t = c;
            dt = d;
        }
    }
    std::size_t s = t == 0 ? 1 : 0;
    Rat ds = distance(inst.candidates[s], x);
    for (std::size_t c = s + 1; c < inst.m(); ++c) {
        if (c == t) continue;
        Rat d = distance(inst.candidates[c], x);
        if (d < ds) {
            s = c;
            ds = d;
        }
    }
    return {t, s};
}

std::vector<std::size_t> sort_by_position(const Instance& inst, std::vector<std::size_t> subset) {
    std::sort(subset.begin(), subset.end(), [&](std::size_t a, std::size_t b) {
        const int c = a == b ? 0 : (inst.agents[a].position < inst.agents[b].position ? -1
                                    : inst.agents[a].position > inst.agents[b].position ? 1 : 0);
        if (c != 0) return c < 0;
        return a < b;
    });
    return subset;
}

std::size_t median_agent(const Instance& inst, int facility) {
    auto group = inst.approvers(facility);
    if (group.empty())
        throw UsageError("median_agent: N_" + std::to_string(facility) + " is empty");
    auto sorted = sort_by_position(inst, std::move(group));
    // ceil(k/2)-th in 1-based rank = index (k-1)/2: the leftmost median.
    return sorted[(sorted.size() - 1) / 2];
}

std::pair<Solution, Rat> optimal(const Instance& inst, Objective obj) {
    if (inst.m() < 2) throw UsageError("optimal requires m >= 2");
    bool found = false;
    Solution best;
    Rat best_value;
    for (std::size_t c1 = 0; c1 < inst.m(); ++c1) {
        for (std::size_t c2 = 0; c2 < inst.m(); ++c2) {
            if (c1 == c2) continue;
            Solution s{c1, c2};
            Rat v = objective_value(inst, s, obj);
            if (!found || v < best_value) {
                found = true;
                best = s;
                best_value = v;
            }
        }
    }
    return {best, best_value};
}

} // namespace facmech
