#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "facmech/verification.hpp"

namespace facmech {

using ordered_json = nlohmann::ordered_json;

/// {"exact": "p/q", "decimal": "..."} — the exact string is authoritative;
/// the decimal is a rendering, never an input to any computation.
ordered_json num_json(const Rat& v);

ordered_json solution_json(const Instance& inst, const Solution& s);
ordered_json ratio_json(const RatioResult& r);
ordered_json trace_json(const Trace& trace);

/// Instance document (version 1): rationals as strings, approval booleans.
/// parse(serialize(inst)) == inst exactly.
ordered_json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

/// Throws ParseError on malformed documents: wrong version, m < 2, empty
/// agent list, q <= 0 rationals, agents approving nothing.
Instance instance_from_json(const ordered_json& doc);
Instance parse_instance(std::string_view text);
Instance load_instance_file(const std::string& path);

/// Full run report: solution, per-agent costs, both objectives, optimal
/// values and ratios, and the mechanism trace.
ordered_json run_report_json(const MechanismId& mech, const std::string& source,
                             const Instance& inst, const MechanismOutcome& outcome,
                             Objective requested);

ordered_json sweep_report_json(const SweepReport& report);

/// CSV emission; comma-separated, LF line endings, header row included.
std::string sweep_csv(const SweepReport& report);
std::string violations_csv_header();
std::string violation_csv_row(std::size_t trial, const SPViolation& v);

/// Writes via a temp file in the same directory followed by a rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path); // throws ParseError

} // namespace facmech
