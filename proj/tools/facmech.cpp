// facmech: strategyproof two-facility location on candidate slots.
// Subcommands: run, opt, fuzz-sp, sweep, paper-suite.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "facmech/io.hpp"
#include "facmech/verification.hpp"

namespace {

using namespace facmech;

// Exit codes: 0 ok, 1 parse/config errors, 2 mechanism domain errors,
// 3 fuzzer found violations.
constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitDomain = 2;
constexpr int kExitViolations = 3;

struct InstanceArgs {
    std::string file;
    std::string fixture;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
    auto* f = cmd->add_option("--instance", args.file, "Instance document (JSON file)");
    auto* x = cmd->add_option("--fixture", args.fixture,
                              "Fixture id, e.g. median-tight?eps=1/1000");
    f->excludes(x);
    x->excludes(f);
}

std::pair<Instance, std::string> load_instance(const InstanceArgs& args) {
    if (!args.fixture.empty())
        return {build_fixture(FixtureSpec::parse(args.fixture)), "fixture:" + args.fixture};
    if (!args.file.empty()) {
        Instance inst = load_instance_file(args.file);
        inst.validate();
        return {std::move(inst), "file:" + args.file};
    }
    throw ConfigError("one of --instance or --fixture is required");
}

MechanismId make_mechanism(const std::string& name, const std::string& alpha) {
    std::optional<AlphaParam> a;
    if (!alpha.empty()) a = AlphaParam::parse(alpha);
    return MechanismId::parse(name, a);
}

int cmd_run(const std::string& mech_name, const std::string& alpha, const InstanceArgs& inst_args,
            const std::string& objective) {
    const MechanismId mech = make_mechanism(mech_name, alpha);
    const Objective obj = parse_objective(objective);
    auto [inst, source] = load_instance(inst_args);
    const MechanismOutcome outcome = run_mechanism(mech, inst);
    std::cout << run_report_json(mech, source, inst, outcome, obj).dump(2) << "\n";
    return kExitOk;
}

int cmd_opt(const InstanceArgs& inst_args, const std::string& objective) {
    const Objective obj = parse_objective(objective);
    auto [inst, source] = load_instance(inst_args);
    const auto [sol, value] = optimal(inst, obj);
    ordered_json out;
    out["instance_source"] = source;
    out["objective"] = std::string(objective_name(obj));
    out["solution"] = solution_json(inst, sol);
    out["value"] = num_json(value);
    out["tie_break"] = "lexicographic (c1, c2)";
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_fuzz_sp(const std::string& mech_name, const std::string& alpha,
                const std::string& generator, std::size_t trials, std::uint64_t seed,
                const std::string& out_csv) {
    const MechanismId mech = make_mechanism(mech_name, alpha);
    const GeneratorSpec gen = GeneratorSpec::parse(generator);
    check_generator_compat(gen, mech);

    std::string csv = violations_csv_header();
    std::size_t violation_count = 0;
    std::size_t anomalies = 0;
    ordered_json first_violation;
    for (std::size_t t = 0; t < trials; ++t) {
        const Instance inst = generate_for_mechanism(gen, mech, mix_seed(seed, t));
        const SPCheckResult res = check_sp(mech, inst);
        anomalies += res.domain_error_deviations;
        for (const SPViolation& v : res.violations) {
            if (violation_count == 0) {
                first_violation = ordered_json{{"trial", t},
                                               {"agent", v.agent},
                                               {"true_x", v.true_position.str()},
                                               {"misreport", v.misreport.str()},
                                               {"true_cost", v.true_cost.str()},
                                               {"dev_cost", v.deviated_cost.str()},
                                               {"instance", instance_to_json(inst)}};
            }
            ++violation_count;
            csv += violation_csv_row(t, v);
        }
    }
    if (!out_csv.empty()) write_file_atomic(out_csv, csv);

    ordered_json summary;
    summary["mechanism"] = mech.name();
    if (mech.kind == MechanismId::Kind::AlphaStatistic) summary["alpha"] = mech.alpha.str();
    summary["generator"] = gen.str();
    summary["trials"] = trials;
    summary["seed"] = seed;
    summary["violations"] = violation_count;
    summary["domain_error_anomalies"] = anomalies;
    if (violation_count > 0) summary["first_violation"] = first_violation;
    std::cout << summary.dump(2) << "\n";
    return violation_count == 0 ? kExitOk : kExitViolations;
}

int cmd_sweep(const std::string& mech_name, const std::string& alpha,
              const std::string& objective, const std::string& generator, std::size_t trials,
              std::uint64_t seed, const std::string& out_csv) {
    const MechanismId mech = make_mechanism(mech_name, alpha);
    const Objective obj = parse_objective(objective);
    const GeneratorSpec gen = GeneratorSpec::parse(generator);
    const SweepReport report = sweep(mech, obj, gen, trials, seed);
    write_file_atomic(out_csv, sweep_csv(report));
    std::cout << sweep_report_json(report).dump(2) << "\n";
    return kExitOk;
}

struct SuiteRow {
    FixtureSpec fixture;
    MechanismId mechanism;
    Objective objective;
    BoundExpr bound;
};

// Every fixture paired with the mechanism whose worst case it probes.
std::vector<SuiteRow> suite_rows(const Rat& eps, unsigned long n, unsigned long x) {
    const BoundExpr two = BoundExpr::rational(Rat(2));
    const BoundExpr three = BoundExpr::rational(Rat(3));
    const BoundExpr gold = BoundExpr::one_plus_sqrt2();
    const Objective sc = Objective::SocialCost;
    const Objective mc = Objective::MaxCost;
    auto fx = [&](Fixture id) { return FixtureSpec{id, eps, n, x, false}; };
    return {
        {fx(Fixture::MedianTight), MechanismId::median2(), sc, three},
        {fx(Fixture::ScHomLowerI1), MechanismId::alpha_stat(), sc, gold},
        {fx(Fixture::ScHomLowerCase1End), MechanismId::alpha_stat(), sc, gold},
        {fx(Fixture::ScHomLowerCase2End), MechanismId::alpha_stat(), sc, gold},
        {fx(Fixture::ScHomLowerCase3End), MechanismId::alpha_stat(), sc, gold},
        {fx(Fixture::ScGeneralLowerI1), MechanismId::pmm(), sc, three},
        {fx(Fixture::ScGeneralLowerI2), MechanismId::pmm(), sc, three},
        {fx(Fixture::PmmExample), MechanismId::naive_median_f1(), sc, three},
        {fx(Fixture::PmmExample), MechanismId::pmm(), sc, three},
        {fx(Fixture::McHomLowerI1), MechanismId::leftmost_priority(), mc, two},
        {fx(Fixture::McHomLowerI2), MechanismId::leftmost_priority(), mc, two},
        {fx(Fixture::VfpExample), MechanismId::naive_left_right(), mc, three},
        {fx(Fixture::VfpExample), MechanismId::vote_for_priority(), mc, three},
        {fx(Fixture::McGeneralLowerI1), MechanismId::general_max(), mc, three},
        {fx(Fixture::McGeneralLowerI2), MechanismId::general_max(), mc, three},
    };
}

int cmd_paper_suite(const std::string& eps_list, unsigned long n, unsigned long x,
                    const std::string& out_dir) {
    std::vector<Rat> eps_values;
    std::string item;
    for (std::string_view rest = eps_list; !rest.empty();) {
        auto comma = rest.find(',');
        item = std::string(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        Rat e = Rat::parse(item);
        if (e.sign() <= 0 || e >= Rat(1, 8))
            throw ConfigError("eps values must lie in (0, 1/8), got " + e.str());
        eps_values.push_back(std::move(e));
    }
    if (eps_values.empty()) throw ConfigError("--eps-list is empty");

    std::string csv =
        "fixture,mechanism,objective,eps,mech_value,opt_value,ratio,ratio_decimal,bound,verdict,"
        "within_bound\n";
    std::size_t rows = 0;
    for (const Rat& eps : eps_values) {
        for (const SuiteRow& row : suite_rows(eps, n, x)) {
            const Instance inst = build_fixture(row.fixture);
            const RatioResult r = ratio(row.mechanism, inst, row.objective);
            const int cmp = compare_ratio_to_bound(r, row.bound);
            csv += row.fixture.str() + "," + row.mechanism.name() + "," +
                   std::string(objective_name(row.objective)) + "," + eps.str() + "," +
                   r.mech_value.str() + "," + r.opt_value.str() + "," +
                   (r.infinite ? "inf" : r.ratio.str()) + "," +
                   (r.infinite ? "inf" : r.ratio.decimal()) + "," + row.bound.str() + "," +
                   (cmp < 0 ? "<" : cmp == 0 ? "=" : ">") + "," +
                   (cmp <= 0 ? "true" : "false") + "\n";
            ++rows;
        }
    }
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/paper_suite.csv";
    write_file_atomic(path, csv);

    ordered_json summary;
    summary["rows"] = rows;
    summary["eps_values"] = static_cast<std::uint64_t>(eps_values.size());
    summary["out"] = path;
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic strategyproof mechanisms for two-facility location on a line "
                 "with candidate slots: exact runs, brute-force optimum, SP fuzzing, ratio "
                 "sweeps."};
    app.require_subcommand(1);

    std::string mech_name, alpha, objective, generator, out_path, eps_list;
    InstanceArgs inst_args;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    unsigned long suite_n = 10000, suite_x = 100;

    auto* run = app.add_subcommand("run", "Run a mechanism on an instance and report exactly");
    run->add_option("--mechanism", mech_name)->required();
    run->add_option("--alpha", alpha, "alpha-stat parameter: sqrt2-1 (default) or p/q");
    add_instance_options(run, inst_args);
    run->add_option("--objective", objective, "sc or mc")->required();

    auto* opt = app.add_subcommand("opt", "Brute-force optimal solution");
    add_instance_options(opt, inst_args);
    opt->add_option("--objective", objective)->required();

    auto* fuzz = app.add_subcommand("fuzz-sp", "Strategyproofness fuzzing over random instances");
    fuzz->add_option("--mechanism", mech_name)->required();
    fuzz->add_option("--alpha", alpha);
    fuzz->add_option("--generator", generator)->required();
    fuzz->add_option("--trials", trials)->required();
    fuzz->add_option("--seed", seed)->required();
    fuzz->add_option("--out", out_path, "violations CSV path");

    auto* sweep_cmd = app.add_subcommand("sweep", "Approximation-ratio sweep over random instances");
    sweep_cmd->add_option("--mechanism", mech_name)->required();
    sweep_cmd->add_option("--alpha", alpha);
    sweep_cmd->add_option("--objective", objective)->required();
    sweep_cmd->add_option("--generator", generator)->required();
    sweep_cmd->add_option("--trials", trials)->required();
    sweep_cmd->add_option("--seed", seed)->required();
    sweep_cmd->add_option("--out", out_path, "per-trial CSV path")->required();

    auto* suite = app.add_subcommand("paper-suite", "Fixture-by-mechanism ratio table");
    suite->add_option("--eps-list", eps_list, "comma-separated rationals in (0, 1/8)")
        ->default_val("1/10,1/100,1/1000,1/10000");
    suite->add_option("--n", suite_n, "agent count for the homogeneous lower-bound family");
    suite->add_option("--x", suite_x, "group size parameter of the pmm counterexample");
    suite->add_option("--out", out_path, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(mech_name, alpha, inst_args, objective);
        if (opt->parsed()) return cmd_opt(inst_args, objective);
        if (fuzz->parsed()) return cmd_fuzz_sp(mech_name, alpha, generator, trials, seed, out_path);
        if (sweep_cmd->parsed())
            return cmd_sweep(mech_name, alpha, objective, generator, trials, seed, out_path);
        if (suite->parsed()) return cmd_paper_suite(eps_list, suite_n, suite_x, out_path);
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
