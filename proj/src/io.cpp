#include "facmech/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace facmech {

ordered_json num_json(const Rat& v) {
    return ordered_json{{"exact", v.str()}, {"decimal", v.decimal()}};
}

ordered_json solution_json(const Instance& inst, const Solution& s) {
    return ordered_json{{"c1", s.c1},
                        {"c2", s.c2},
                        {"coord1", num_json(inst.candidates[s.c1])},
                        {"coord2", num_json(inst.candidates[s.c2])}};
}

ordered_json ratio_json(const RatioResult& r) {
    ordered_json j{{"mech_value", num_json(r.mech_value)},
                   {"opt_value", num_json(r.opt_value)},
                   {"infinite", r.infinite}};
    if (r.infinite)
        j["ratio"] = nullptr;
    else
        j["ratio"] = num_json(r.ratio);
    return j;
}

ordered_json trace_json(const Trace& trace) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : trace) arr.push_back(ordered_json{{"key", e.key}, {"value", e.value}});
    return arr;
}

ordered_json instance_to_json(const Instance& inst) {
    ordered_json doc;
    doc["version"] = 1;
    ordered_json cands = ordered_json::array();
    for (const Rat& c : inst.candidates) cands.push_back(c.str());
    doc["candidates"] = std::move(cands);
    ordered_json agents = ordered_json::array();
    for (const Agent& a : inst.agents)
        agents.push_back(
            ordered_json{{"x", a.position.str()}, {"p1", a.pref.p1}, {"p2", a.pref.p2}});
    doc["agents"] = std::move(agents);
    return doc;
}

std::string serialize_instance(const Instance& inst) {
    return instance_to_json(inst).dump(2) + "\n";
}

Instance instance_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != 1)
        throw ParseError("instance document must carry version = 1");
    if (!doc.contains("candidates") || !doc["candidates"].is_array())
        throw ParseError("instance document needs a 'candidates' array");
    if (!doc.contains("agents") || !doc["agents"].is_array())
        throw ParseError("instance document needs an 'agents' array");

    Instance inst;
    for (const auto& c : doc["candidates"]) {
        if (!c.is_string()) throw ParseError("candidate coordinates must be rational strings");
        inst.candidates.push_back(Rat::parse(c.get<std::string>()));
    }
    if (inst.candidates.size() < 2) throw ParseError("instance document rejected: m < 2");

    for (const auto& a : doc["agents"]) {
        if (!a.is_object() || !a.contains("x") || !a["x"].is_string() || !a.contains("p1") ||
            !a["p1"].is_boolean() || !a.contains("p2") || !a["p2"].is_boolean())
            throw ParseError("each agent needs {\"x\": rational string, \"p1\": bool, \"p2\": bool}");
        Agent agent;
        agent.position = Rat::parse(a["x"].get<std::string>());
        agent.pref = {a["p1"].get<bool>(), a["p2"].get<bool>()};
        if (!agent.pref.valid())
            throw ParseError("instance document rejected: agent approves no facility");
        inst.agents.push_back(std::move(agent));
    }
    if (inst.agents.empty()) throw ParseError("instance document rejected: no agents");
    return inst;
}

Instance parse_instance(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return instance_from_json(doc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Instance load_instance_file(const std::string& path) {
    return parse_instance(read_file(path));
}

ordered_json run_report_json(const MechanismId& mech, const std::string& source,
                             const Instance& inst, const MechanismOutcome& outcome,
                             Objective requested) {
    const Rat sc = objective_value(inst, outcome.solution, Objective::SocialCost);
    const Rat mc = objective_value(inst, outcome.solution, Objective::MaxCost);
    const auto [opt_sc_sol, opt_sc] = optimal(inst, Objective::SocialCost);
    const auto [opt_mc_sol, opt_mc] = optimal(inst, Objective::MaxCost);
    const RatioResult sc_ratio = RatioResult::from_values(sc, opt_sc);
    const RatioResult mc_ratio = RatioResult::from_values(mc, opt_mc);
    const RatioResult& selected = requested == Objective::SocialCost ? sc_ratio : mc_ratio;

    ordered_json report;
    report["mechanism"] = mech.name();
    if (mech.kind == MechanismId::Kind::AlphaStatistic) report["alpha"] = mech.alpha.str();
    report["instance_source"] = source;
    report["objective"] = std::string(objective_name(requested));
    report["solution"] = solution_json(inst, outcome.solution);
    ordered_json costs = ordered_json::array();
    for (std::size_t i = 0; i < inst.n(); ++i)
        costs.push_back(num_json(agent_cost(inst, i, outcome.solution)));
    report["per_agent_costs"] = std::move(costs);
    report["sc"] = num_json(sc);
    report["mc"] = num_json(mc);
    report["opt_sc"] = num_json(opt_sc);
    report["opt_mc"] = num_json(opt_mc);
    report["ratio_sc"] = ratio_json(sc_ratio);
    report["ratio_mc"] = ratio_json(mc_ratio);
    if (selected.infinite)
        report["ratio"] = "inf";
    else
        report["ratio"] = selected.ratio.str();
    report["trace"] = trace_json(outcome.trace);
    return report;
}

ordered_json sweep_report_json(const SweepReport& r) {
    ordered_json j;
    j["mechanism"] = r.mechanism.name();
    if (r.mechanism.kind == MechanismId::Kind::AlphaStatistic)
        j["alpha"] = r.mechanism.alpha.str();
    j["objective"] = std::string(objective_name(r.objective));
    j["generator"] = r.generator.str();
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["max_defined"] = r.max_defined;
    if (r.max_defined) {
        j["max_ratio"] = ratio_json(r.max_ratio);
        j["argmax_trial"] = r.argmax_trial;
        j["argmax_instance"] = instance_to_json(r.argmax_instance);
    }
    j["missing_side_trials"] = r.missing_side_trials;
    if (r.standard_max_defined) j["max_ratio_standard"] = ratio_json(r.max_ratio_standard);
    j["infinite_trials"] = r.infinite_trials;
    ordered_json hist = ordered_json::array();
    for (const auto& b : r.histogram)
        hist.push_back(ordered_json{{"le", b.upper.str()}, {"count", b.count}});
    j["ratio_histogram"] = std::move(hist);
    j["histogram_overflow"] = r.histogram_overflow;
    return j;
}

std::string sweep_csv(const SweepReport& r) {
    std::string out = "trial,n,m,mech_value,opt_value,ratio,is_infinite\n";
    for (std::size_t t = 0; t < r.trial_log.size(); ++t) {
        const SweepTrial& row = r.trial_log[t];
        out += std::to_string(t) + "," + std::to_string(row.n) + "," + std::to_string(row.m) +
               "," + row.ratio.mech_value.str() + "," + row.ratio.opt_value.str() + "," +
               (row.ratio.infinite ? "inf" : row.ratio.ratio.str()) + "," +
               (row.ratio.infinite ? "true" : "false") + "\n";
    }
    return out;
}

std::string violations_csv_header() {
    return "trial,agent,true_x,misreport,true_cost,dev_cost,slots_before,slots_after\n";
}

std::string violation_csv_row(std::size_t trial, const SPViolation& v) {
    return std::to_string(trial) + "," + std::to_string(v.agent) + "," + v.true_position.str() +
           "," + v.misreport.str() + "," + v.true_cost.str() + "," + v.deviated_cost.str() + "," +
           std::to_string(v.outcome_before.c1) + ";" + std::to_string(v.outcome_before.c2) + "," +
           std::to_string(v.outcome_after.c1) + ";" + std::to_string(v.outcome_after.c2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp);
        out << content;
        if (!out.good()) throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("atomic rename failed: " + path);
}

} // namespace facmech
