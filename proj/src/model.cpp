#include "facmech/model.hpp"

namespace facmech {

void Instance::validate() const {
    if (agents.empty()) throw UsageError("instance invariant violated: n >= 1");
    if (candidates.size() < 2) throw UsageError("instance invariant violated: m >= 2");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (!agents[i].pref.valid())
            throw UsageError("instance invariant violated: agent " + std::to_string(i) +
                             " approves no facility");
    }
}

bool Instance::homogeneous() const {
    for (const auto& a : agents)
        if (!a.pref.both()) return false;
    return true;
}

bool Instance::has_both_approver() const {
    for (const auto& a : agents)
        if (a.pref.both()) return true;
    return false;
}

bool Instance::singleton_only() const {
    for (const auto& a : agents)
        if (a.pref.both()) return false;
    return true;
}

std::vector<std::size_t> Instance::approvers(int facility) const {
    if (facility != 1 && facility != 2) throw UsageError("facility index must be 1 or 2");
    std::vector<std::size_t> out;
    out.reserve(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const bool approves = facility == 1 ? agents[i].pref.p1 : agents[i].pref.p2;
        if (approves) out.push_back(i);
    }
    return out;
}

bool operator==(const Agent& a, const Agent& b) {
    return a.position == b.position && a.pref.p1 == b.pref.p1 && a.pref.p2 == b.pref.p2;
}

bool operator==(const Instance& a, const Instance& b) {
    return a.agents == b.agents && a.candidates == b.candidates;
}

std::string_view objective_name(Objective obj) {
    return obj == Objective::SocialCost ? "sc" : "mc";
}

Objective parse_objective(std::string_view name) {
    if (name == "sc" || name == "social-cost") return Objective::SocialCost;
    if (name == "mc" || name == "max-cost") return Objective::MaxCost;
    throw ConfigError("unknown objective: '" + std::string(name) + "' (expected sc or mc)");
}

} // namespace facmech
