#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "facmech/rational.hpp"

namespace facmech {

/// Per-agent approval pair; at least one facility must be approved.
struct ApprovalPref {
    bool p1 = true;
    bool p2 = true;

    bool valid() const { return p1 || p2; }
    bool both() const { return p1 && p2; }
};

struct Agent {
    Rat position;
    ApprovalPref pref;
};

/// The tuple I = (x, p, C). Candidates are indexed slots; duplicate
/// coordinates are permitted, and feasibility of a solution means distinct
/// slot indices, not distinct coordinates.
struct Instance {
    std::vector<Agent> agents;
    std::vector<Rat> candidates;

    std::size_t n() const { return agents.size(); }
    std::size_t m() const { return candidates.size(); }

    /// Throws UsageError naming the violated invariant (n >= 1, m >= 2,
    /// every agent approves at least one facility).
    void validate() const;

    bool homogeneous() const;
    bool has_both_approver() const;
    bool singleton_only() const; // every agent approves exactly one facility

    /// Indices of N_j (facility = 1 or 2) in original agent order.
    std::vector<std::size_t> approvers(int facility) const;
};

bool operator==(const Agent& a, const Agent& b);
bool operator==(const Instance& a, const Instance& b);

/// Ordered pair of distinct candidate slot indices; F1 at slot c1, F2 at c2.
struct Solution {
    std::size_t c1 = 0;
    std::size_t c2 = 1;

    friend bool operator==(const Solution& a, const Solution& b) {
        return a.c1 == b.c1 && a.c2 == b.c2;
    }
};

enum class Objective { SocialCost, MaxCost };

std::string_view objective_name(Objective obj); // "sc" / "mc"
Objective parse_objective(std::string_view name);

} // namespace facmech
