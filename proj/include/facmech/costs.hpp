#pragma once

#include <utility>

#include "facmech/model.hpp"

namespace facmech {

/// d(x, y) = |x - y|, exact.
Rat distance(const Rat& x, const Rat& y);

/// Sum over approved facilities j of d(x_i, coordinate(c_j)).
Rat agent_cost(const Instance& inst, std::size_t agent, const Solution& s);

/// SocialCost: sum of individual costs; MaxCost: maximum individual cost.
/// Throws UsageError if the solution is infeasible (c1 == c2 or bad slot).
Rat objective_value(const Instance& inst, const Solution& s, Objective obj);

/// (t, s): the closest and second-closest candidate slots to x, ties broken
/// by lowest slot index. Requires m >= 2.
std::pair<std::size_t, std::size_t> nearest_candidates(const Instance& inst, const Rat& x);

/// Index of the leftmost median agent of N_facility: the ceil(k/2)-th agent
/// of the group in nondecreasing position order, with position ties broken
/// by lowest agent index. Throws UsageError if the group is empty.
std::size_t median_agent(const Instance& inst, int facility);

/// Brute-force optimum: enumerates all m*(m-1) ordered pairs of distinct
/// slots in lexicographic order and returns the first minimizer.
std::pair<Solution, Rat> optimal(const Instance& inst, Objective obj);

/// Agent indices from `subset` sorted by (position, original index).
std::vector<std::size_t> sort_by_position(const Instance& inst,
                                          std::vector<std::size_t> subset);

} // namespace facmech
