#include "facmech/verification.hpp"

#include <algorithm>
#include <optional>

#include "facmech/parallel.hpp"

namespace facmech {

RatioResult RatioResult::from_values(Rat mech, Rat opt) {
    RatioResult r;
    r.mech_value = std::move(mech);
    r.opt_value = std::move(opt);
    if (r.opt_value.is_zero()) {
        if (r.mech_value.is_zero())
            r.ratio = Rat(1);
        else
            r.infinite = true;
    } else {
        r.ratio = r.mech_value / r.opt_value;
    }
    return r;
}

std::vector<Rat> pivotal_misreports(const Instance& inst, std::size_t agent) {
    if (agent >= inst.n()) throw UsageError("pivotal_misreports: agent index out of range");

    std::vector<Rat> base;
    base.reserve(inst.m() * (inst.m() + 1) / 2 + inst.n());
    for (const Rat& c : inst.candidates) base.push_back(c);
    for (std::size_t i = 0; i < inst.m(); ++i)
        for (std::size_t j = i + 1; j < inst.m(); ++j)
            base.push_back((inst.candidates[i] + inst.candidates[j]) / Rat(2));
    for (std::size_t i = 0; i < inst.n(); ++i)
        if (i != agent) base.push_back(inst.agents[i].position);

    // eta = (minimum positive pairwise gap among all coordinates) / 4;
    // 1 when every coordinate coincides.
    std::vector<Rat> coords;
    coords.reserve(inst.n() + inst.m());
    for (const auto& a : inst.agents) coords.push_back(a.position);
    for (const Rat& c : inst.candidates) coords.push_back(c);
    std::sort(coords.begin(), coords.end());
    std::optional<Rat> min_gap;
    for (std::size_t i = 1; i < coords.size(); ++i) {
        Rat gap = coords[i] - coords[i - 1];
        if (gap.sign() > 0 && (!min_gap || gap < *min_gap)) min_gap = std::move(gap);
    }
    const Rat eta = min_gap ? *min_gap / Rat(4) : Rat(1);
    const Rat span = coords.back() - coords.front();

    std::vector<Rat> out = base;
    out.reserve(base.size() * 3 + 2);
    for (const Rat& x : base) {
        out.push_back(x - eta);
        out.push_back(x + eta);
    }
    out.push_back(coords.front() - Rat(2) * span);
    out.push_back(coords.back() + Rat(2) * span);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SPCheckResult check_sp(const MechanismId& mech, const Instance& inst) {
    const MechanismOutcome truth = run_mechanism(mech, inst);

    struct Job {
        std::size_t agent;
        Rat misreport;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < inst.n(); ++a) {
        const Rat true_cost = agent_cost(inst, a, truth.solution);
        if (true_cost.is_zero()) continue; // cost 0 cannot decrease
        for (Rat& x : pivotal_misreports(inst, a)) {
            if (x == inst.agents[a].position) continue;
            jobs.push_back({a, std::move(x)});
        }
    }

    struct JobResult {
        std::optional<SPViolation> violation;
        bool domain_error = false;
    };
    std::vector<JobResult> results(jobs.size());
    const std::size_t workers = std::max<std::size_t>(1, worker_count());
    std::vector<Instance> scratch(std::min(workers, std::max<std::size_t>(1, jobs.size())), inst);

    parallel_for(jobs.size(), [&](std::size_t worker, std::size_t k) {
        Instance& dev = scratch[worker];
        const Job& job = jobs[k];
        dev.agents[job.agent].position = job.misreport;
        try {
            const MechanismOutcome moved = run_mechanism(mech, dev);
            const Rat dev_cost = agent_cost(inst, job.agent, moved.solution);
            const Rat true_cost = agent_cost(inst, job.agent, truth.solution);
            if (dev_cost < true_cost) {
                results[k].violation = SPViolation{job.agent,
                                                   inst.agents[job.agent].position,
                                                   job.misreport,
                                                   true_cost,
                                                   dev_cost,
                                                   truth.solution,
                                                   moved.solution};
            }
        } catch (const DomainError&) {
            // Deviation left the mechanism's domain: not a violation, but
            // anomalous for position-only deviations.
            results[k].domain_error = true;
        }
        dev.agents[job.agent].position = inst.agents[job.agent].position;
    });

    SPCheckResult out;
    for (auto& r : results) {
        if (r.violation) out.violations.push_back(std::move(*r.violation));
        if (r.domain_error) ++out.domain_error_deviations;
    }
    return out;
}

RatioResult ratio(const MechanismId& mech, const Instance& inst, Objective obj) {
    const MechanismOutcome outcome = run_mechanism(mech, inst);
    const Rat mech_value = objective_value(inst, outcome.solution, obj);
    const Rat opt_value = optimal(inst, obj).second;
    return RatioResult::from_values(mech_value, opt_value);
}

int compare_ratio_to_bound(const RatioResult& r, const BoundExpr& bound) {
    if (r.infinite) return 1;
    return bound.compare(r.ratio);
}

namespace {

std::vector<HistBucket> make_histogram() {
    std::vector<HistBucket> h;
    for (const Rat& ub : {Rat(1), Rat(3, 2), Rat(2), Rat(9, 4), Rat(5, 2), Rat(11, 4), Rat(3),
                          Rat(7, 2), Rat(4), Rat(5)})
        h.push_back({ub, 0});
    return h;
}

// max_ratio ordering: infinite beats finite; finite compare exactly.
bool ratio_greater(const RatioResult& a, const RatioResult& b) {
    if (a.infinite != b.infinite) return a.infinite;
    if (a.infinite) return false;
    return a.ratio > b.ratio;
}

} // namespace

SweepReport sweep(const MechanismId& mech, Objective obj, const GeneratorSpec& gen,
                  std::size_t trials, std::uint64_t seed) {
    check_generator_compat(gen, mech);

    SweepReport report;
    report.mechanism = mech;
    report.objective = obj;
    report.generator = gen;
    report.trials = trials;
    report.seed = seed;
    report.histogram = make_histogram();
    if (trials == 0) return report;

    report.trial_log.resize(trials);
    parallel_for(trials, [&](std::size_t, std::size_t t) {
        const Instance inst = generate_for_mechanism(gen, mech, mix_seed(seed, t));
        const MechanismOutcome outcome = run_mechanism(mech, inst);
        SweepTrial& row = report.trial_log[t];
        row.n = inst.n();
        row.m = inst.m();
        row.ratio = RatioResult::from_values(objective_value(inst, outcome.solution, obj),
                                             optimal(inst, obj).second);
        row.missing_side = trace_find(outcome.trace, "missing_side") != nullptr;
    });

    for (std::size_t t = 0; t < trials; ++t) {
        const SweepTrial& row = report.trial_log[t];
        if (!report.max_defined || ratio_greater(row.ratio, report.max_ratio)) {
            report.max_defined = true;
            report.max_ratio = row.ratio;
            report.argmax_trial = t;
        }
        if (row.missing_side) {
            ++report.missing_side_trials;
        } else if (!report.standard_max_defined ||
                   ratio_greater(row.ratio, report.max_ratio_standard)) {
            report.standard_max_defined = true;
            report.max_ratio_standard = row.ratio;
        }
        if (row.ratio.infinite) {
            ++report.infinite_trials;
        } else {
            bool bucketed = false;
            for (auto& b : report.histogram) {
                if (row.ratio.ratio <= b.upper) {
                    ++b.count;
                    bucketed = true;
                    break;
                }
            }
            if (!bucketed) ++report.histogram_overflow;
        }
    }
    report.argmax_instance = generate_for_mechanism(gen, mech, mix_seed(seed, report.argmax_trial));
    return report;
}

} // namespace facmech
