#pragma once

#include <initializer_list>
#include <string_view>
#include <vector>

#include "facmech/model.hpp"

namespace facmech::test {

inline Rat R(std::string_view s) {
    return Rat::parse(s);
}

struct AgentSpec {
    std::string_view x;
    bool p1 = true;
    bool p2 = true;
};

inline Instance make_inst(std::initializer_list<AgentSpec> agents,
                          std::initializer_list<std::string_view> candidates) {
    Instance inst;
    for (const auto& a : agents) inst.agents.push_back({R(a.x), {a.p1, a.p2}});
    for (const auto& c : candidates) inst.candidates.push_back(R(c));
    return inst;
}

// Test-side optimum oracle: re-enumerates every ordered slot pair with its
// own cost loops. Deliberately independent of facmech::optimal,
// facmech::objective_value and facmech::agent_cost.
inline Rat oracle_best_value(const Instance& inst, Objective obj) {
    bool found = false;
    Rat best;
    for (std::size_t c1 = 0; c1 < inst.candidates.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < inst.candidates.size(); ++c2) {
            if (c1 == c2) continue;
            Rat value;
            for (const Agent& a : inst.agents) {
                Rat cost;
                if (a.pref.p1) {
                    Rat d = a.position - inst.candidates[c1];
                    if (d.sign() < 0) d = -d;
                    cost += d;
                }
                if (a.pref.p2) {
                    Rat d = a.position - inst.candidates[c2];
                    if (d.sign() < 0) d = -d;
                    cost += d;
                }
                if (obj == Objective::SocialCost)
                    value += cost;
                else if (cost > value)
                    value = cost;
            }
            if (!found || value < best) {
                found = true;
                best = value;
            }
        }
    }
    return best;
}

// Cost of one solution computed the same independent way.
inline Rat oracle_objective(const Instance& inst, std::size_t c1, std::size_t c2, Objective obj) {
    Rat value;
    for (const Agent& a : inst.agents) {
        Rat cost;
        if (a.pref.p1) {
            Rat d = a.position - inst.candidates[c1];
            if (d.sign() < 0) d = -d;
            cost += d;
        }
        if (a.pref.p2) {
            Rat d = a.position - inst.candidates[c2];
            if (d.sign() < 0) d = -d;
            cost += d;
        }
        if (obj == Objective::SocialCost)
            value += cost;
        else if (cost > value)
            value = cost;
    }
    return value;
}

} // namespace facmech::test
