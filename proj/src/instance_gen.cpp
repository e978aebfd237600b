#include "facmech/instance_gen.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace facmech {

namespace {

constexpr unsigned long kMaxResampleAttempts = 10000;

std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t k) {
    return rng() % k;
}

long rng_range(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

Rat random_coord(std::mt19937_64& rng, const GenParams& p) {
    const long num = rng_range(rng, -p.span, p.span);
    const long den = rng_range(rng, 1, static_cast<long>(p.q_max));
    return Rat(num, den);
}

// Small perturbation used by the clustered generator.
Rat random_offset(std::mt19937_64& rng, const GenParams& p) {
    const long num = rng_range(rng, -4, 4);
    const long den = 4 * rng_range(rng, 1, static_cast<long>(p.q_max));
    return Rat(num, den);
}

std::vector<Rat> distinct_candidates(std::mt19937_64& rng, const GenParams& p, std::size_t m,
                                     const std::vector<Rat>& centers) {
    std::vector<Rat> out;
    out.reserve(m);
    for (unsigned long attempt = 0; out.size() < m; ++attempt) {
        if (attempt > kMaxResampleAttempts)
            throw ConfigError("generator cannot draw " + std::to_string(m) +
                              " distinct candidate coordinates within the configured span");
        Rat c = centers.empty() || rng_below(rng, 2) == 0
                    ? random_coord(rng, p)
                    : centers[rng_below(rng, centers.size())] + random_offset(rng, p);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

ApprovalPref random_general_pref(std::mt19937_64& rng) {
    switch (rng_below(rng, 3)) {
    case 0: return {true, false};
    case 1: return {false, true};
    default: return {true, true};
    }
}

Instance generate_with_rng(const GeneratorSpec& gen, std::mt19937_64& rng);

Instance generate_base(GenKind kind, const GenParams& p, std::mt19937_64& rng) {
    if (p.n_max < 1 || p.m_max < 2 || p.q_max < 1 || p.span < 1)
        throw ConfigError("generator bounds must satisfy n >= 1, m >= 2, span >= 1, qmax >= 1");

    const unsigned n_min = kind == GenKind::SingletonPreferences ? 2 : 1;
    if (p.n_max < n_min)
        throw ConfigError("singleton-prefs generator requires n_max >= 2");

    Instance inst;
    const std::size_t n =
        static_cast<std::size_t>(rng_range(rng, static_cast<long>(n_min), static_cast<long>(p.n_max)));
    const std::size_t m = static_cast<std::size_t>(rng_range(rng, 2, static_cast<long>(p.m_max)));

    std::vector<Rat> centers;
    if (kind == GenKind::Clustered) {
        const std::size_t k = 1 + rng_below(rng, 3);
        for (std::size_t i = 0; i < k; ++i) centers.push_back(random_coord(rng, p));
    }

    inst.candidates = distinct_candidates(rng, p, m, centers);

    inst.agents.resize(n);
    for (auto& a : inst.agents) {
        a.position = centers.empty() ? random_coord(rng, p)
                                     : centers[rng_below(rng, centers.size())] + random_offset(rng, p);
    }

    auto assign_prefs = [&](auto draw, auto acceptable) {
        for (unsigned long attempt = 0;; ++attempt) {
            if (attempt > kMaxResampleAttempts)
                throw ConfigError("generator could not satisfy its preference-structure guarantee");
            for (auto& a : inst.agents) a.pref = draw();
            if (acceptable()) return;
        }
    };

    switch (kind) {
    case GenKind::UniformHomogeneous:
        for (auto& a : inst.agents) a.pref = {true, true};
        break;
    case GenKind::UniformGeneral:
    case GenKind::Clustered:
        assign_prefs([&] { return random_general_pref(rng); },
                     [&] { return !inst.approvers(1).empty() && !inst.approvers(2).empty(); });
        break;
    case GenKind::SingletonPreferences:
        assign_prefs(
            [&] {
                return rng_below(rng, 2) == 0 ? ApprovalPref{true, false} : ApprovalPref{false, true};
            },
            [&] { return !inst.approvers(1).empty() && !inst.approvers(2).empty(); });
        break;
    case GenKind::Duplication:
        throw UsageError("generate_base: duplication is not a base generator");
    }
    return inst;
}

Instance generate_with_rng(const GeneratorSpec& gen, std::mt19937_64& rng) {
    if (gen.kind == GenKind::Duplication) {
        if (gen.copies < 1) throw ConfigError("duplication requires copies >= 1");
        if (gen.base == GenKind::Duplication)
            throw ConfigError("duplication base must be a base generator");
        Instance base = generate_base(gen.base, gen.params, rng);
        Instance out;
        out.candidates = base.candidates;
        out.agents.reserve(base.n() * gen.copies);
        for (const auto& a : base.agents)
            for (unsigned c = 0; c < gen.copies; ++c) out.agents.push_back(a);
        return out;
    }
    return generate_base(gen.kind, gen.params, rng);
}

std::string_view gen_kind_name(GenKind k) {
    switch (k) {
    case GenKind::UniformHomogeneous: return "uniform-homogeneous";
    case GenKind::UniformGeneral: return "uniform-general";
    case GenKind::SingletonPreferences: return "singleton-prefs";
    case GenKind::Clustered: return "clustered";
    case GenKind::Duplication: return "duplication";
    }
    return "?";
}

GenKind parse_gen_kind(std::string_view name) {
    for (GenKind k : {GenKind::UniformHomogeneous, GenKind::UniformGeneral,
                      GenKind::SingletonPreferences, GenKind::Clustered, GenKind::Duplication})
        if (gen_kind_name(k) == name) return k;
    throw ConfigError("unknown generator: '" + std::string(name) + "'");
}

// Splits "name?k=v&k=v" into the name and a key/value map.
std::pair<std::string, std::map<std::string, std::string>> split_query(std::string_view text,
                                                                       std::string_view prefix) {
    if (text.substr(0, prefix.size()) == prefix) text.remove_prefix(prefix.size());
    std::map<std::string, std::string> params;
    std::string name(text);
    if (auto qm = text.find('?'); qm != std::string_view::npos) {
        name = std::string(text.substr(0, qm));
        std::string_view rest = text.substr(qm + 1);
        while (!rest.empty()) {
            std::string_view item = rest;
            if (auto amp = rest.find('&'); amp != std::string_view::npos) {
                item = rest.substr(0, amp);
                rest = rest.substr(amp + 1);
            } else {
                rest = {};
            }
            auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0)
                throw ConfigError("malformed parameter '" + std::string(item) + "' in '" +
                                  std::string(text) + "'");
            params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
        }
    }
    return {name, params};
}

unsigned long parse_count(const std::string& v, const std::string& key) {
    // stoul would silently accept a sign and wrap; require plain digits.
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("parameter " + key + " must be a nonnegative integer, got '" + v + "'");
    try {
        return std::stoul(v);
    } catch (const std::exception&) {
        throw ConfigError("parameter " + key + " is out of range: '" + v + "'");
    }
}

} // namespace

std::string GeneratorSpec::str() const {
    std::string out(gen_kind_name(kind));
    out += "?n=" + std::to_string(params.n_max) + "&m=" + std::to_string(params.m_max) +
           "&span=" + std::to_string(params.span) + "&qmax=" + std::to_string(params.q_max);
    if (kind == GenKind::Duplication)
        out += "&base=" + std::string(gen_kind_name(base)) + "&copies=" + std::to_string(copies);
    return out;
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
    auto [name, params] = split_query(text, "gen:");
    GeneratorSpec spec;
    spec.kind = parse_gen_kind(name);
    for (const auto& [k, v] : params) {
        if (k == "n") spec.params.n_max = static_cast<unsigned>(parse_count(v, k));
        else if (k == "m") spec.params.m_max = static_cast<unsigned>(parse_count(v, k));
        else if (k == "span") spec.params.span = static_cast<long>(parse_count(v, k));
        else if (k == "qmax") spec.params.q_max = static_cast<unsigned>(parse_count(v, k));
        else if (k == "base" && spec.kind == GenKind::Duplication) spec.base = parse_gen_kind(v);
        else if (k == "copies" && spec.kind == GenKind::Duplication)
            spec.copies = static_cast<unsigned>(parse_count(v, k));
        else throw ConfigError("unknown generator parameter '" + k + "'");
    }
    if (spec.kind == GenKind::Duplication) {
        if (spec.base == GenKind::Duplication)
            throw ConfigError("duplication base must be a base generator");
        if (spec.copies < 1) throw ConfigError("duplication requires copies >= 1");
    }
    return spec;
}

Instance generate(const GeneratorSpec& gen, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return generate_with_rng(gen, rng);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void check_generator_compat(const GeneratorSpec& gen, const MechanismId& mech) {
    const GenKind effective = gen.kind == GenKind::Duplication ? gen.base : gen.kind;
    const bool homogeneous_gen = effective == GenKind::UniformHomogeneous;
    const bool singleton_gen = effective == GenKind::SingletonPreferences;

    switch (mech.kind) {
    case MechanismId::Kind::MedianTwo:
    case MechanismId::Kind::AlphaStatistic:
        if (!homogeneous_gen)
            throw ConfigError(mech.name() + " requires a homogeneous generator, but " +
                              std::string(gen_kind_name(gen.kind)) + " does not guarantee it");
        return;
    case MechanismId::Kind::LeftmostPriority:
        if (singleton_gen)
            throw ConfigError("leftmost-priority needs an agent approving both facilities; "
                              "singleton-prefs never produces one");
        return;
    case MechanismId::Kind::VoteForPriority:
        if (homogeneous_gen)
            throw ConfigError("vote-for-priority needs disjoint approval sets; a homogeneous "
                              "generator never produces them");
        return;
    default:
        return;
    }
}

Instance generate_for_mechanism(const GeneratorSpec& gen, const MechanismId& mech,
                                std::uint64_t seed) {
    check_generator_compat(gen, mech);
    std::mt19937_64 rng(seed);
    for (unsigned long attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        Instance inst = generate_with_rng(gen, rng);
        if (instance_in_domain(mech, inst)) return inst;
    }
    throw ConfigError("generator failed to reach the domain of " + mech.name() + " within " +
                      std::to_string(kMaxResampleAttempts) + " draws");
}

namespace {

struct FixtureInfo {
    Fixture id;
    std::string_view name;
    bool has_n;
    bool has_x;
    bool has_dup;
};

constexpr FixtureInfo kFixtures[] = {
    {Fixture::MedianTight, "median-tight", false, false, false},
    {Fixture::ScHomLowerI1, "sc-hom-lower-i1", true, false, true},
    {Fixture::ScHomLowerCase1End, "sc-hom-lower-case1-end", true, false, true},
    {Fixture::ScHomLowerCase2End, "sc-hom-lower-case2-end", true, false, true},
    {Fixture::ScHomLowerCase3End, "sc-hom-lower-case3-end", true, false, true},
    {Fixture::ScGeneralLowerI1, "sc-general-lower-i1", false, false, false},
    {Fixture::ScGeneralLowerI2, "sc-general-lower-i2", false, false, false},
    {Fixture::PmmExample, "pmm-example", false, true, false},
    {Fixture::McHomLowerI1, "mc-hom-lower-i1", false, false, false},
    {Fixture::McHomLowerI2, "mc-hom-lower-i2", false, false, false},
    {Fixture::VfpExample, "vfp-example", false, false, false},
    {Fixture::McGeneralLowerI1, "mc-general-lower-i1", false, false, false},
    {Fixture::McGeneralLowerI2, "mc-general-lower-i2", false, false, false},
};

const FixtureInfo& fixture_info(Fixture id) {
    for (const auto& f : kFixtures)
        if (f.id == id) return f;
    throw UsageError("bad fixture id");
}

Agent agent(Rat pos, bool p1, bool p2) {
    return Agent{std::move(pos), ApprovalPref{p1, p2}};
}

// Count of agents in set A of the homogeneous lower-bound construction:
// ceil(alpha * n) with alpha = sqrt(2) - 1, resolved exactly.
unsigned long schom_left_count(unsigned long n) {
    return alpha_index(n, AlphaParam::sqrt2_minus_1()).first;
}

std::vector<Rat> schom_candidates(const Rat& eps, bool duplicate_slots) {
    if (duplicate_slots) return {Rat(0), Rat(0), Rat(2), Rat(2)};
    return {-eps, eps, Rat(2) - eps, Rat(2) + eps};
}

} // namespace

std::string FixtureSpec::str() const {
    const FixtureInfo& info = fixture_info(id);
    std::string out(info.name);
    out += "?eps=" + eps.str();
    if (info.has_n) out += "&n=" + std::to_string(n);
    if (info.has_x) out += "&x=" + std::to_string(x);
    if (info.has_dup && duplicate_slots) out += "&dup=1";
    return out;
}

FixtureSpec FixtureSpec::parse(std::string_view text) {
    auto [name, params] = split_query(text, "fixture:");
    FixtureSpec spec;
    bool found = false;
    for (const auto& f : kFixtures) {
        if (f.name == name) {
            spec.id = f.id;
            found = true;
            break;
        }
    }
    if (!found) throw ConfigError("unknown fixture: '" + name + "'");
    for (const auto& [k, v] : params) {
        if (k == "eps") {
            try {
                spec.eps = Rat::parse(v);
            } catch (const ParseError&) {
                throw ConfigError("fixture eps must be a rational, got '" + v + "'");
            }
        } else if (k == "n") spec.n = parse_count(v, k);
        else if (k == "x") spec.x = parse_count(v, k);
        else if (k == "dup") spec.duplicate_slots = parse_count(v, k) != 0;
        else throw ConfigError("unknown fixture parameter '" + k + "'");
    }
    return spec;
}

Instance build_fixture(const FixtureSpec& spec) {
    if (spec.eps.sign() <= 0 || spec.eps >= Rat(1, 8))
        throw ConfigError("fixture eps must lie in (0, 1/8), got " + spec.eps.str());
    if (spec.n < 1 || spec.x < 1)
        throw ConfigError("fixture parameters n and x must be >= 1");

    const Rat& e = spec.eps;
    Instance inst;
    switch (spec.id) {
    case Fixture::MedianTight:
        inst.candidates = {Rat(0), e, Rat(1) - e, Rat(1)};
        inst.agents = {agent(Rat(1, 2) - e, true, true), agent(Rat(1), true, true)};
        break;
    case Fixture::ScHomLowerI1:
    case Fixture::ScHomLowerCase1End:
    case Fixture::ScHomLowerCase2End:
    case Fixture::ScHomLowerCase3End: {
        inst.candidates = schom_candidates(e, spec.duplicate_slots);
        const unsigned long left = schom_left_count(spec.n);
        Rat pos_left(0), pos_right(2);
        if (spec.id == Fixture::ScHomLowerCase1End || spec.id == Fixture::ScHomLowerCase3End)
            pos_left = Rat(1) - e; // set A fully moved inward
        if (spec.id == Fixture::ScHomLowerCase2End) pos_right = Rat(1) + e;
        for (unsigned long i = 0; i < spec.n; ++i)
            inst.agents.push_back(agent(i < left ? pos_left : pos_right, true, true));
        break;
    }
    case Fixture::ScGeneralLowerI1:
        inst.candidates = {Rat(-1), Rat(1)};
        inst.agents = {agent(e, true, false), agent(e, false, true)};
        break;
    case Fixture::ScGeneralLowerI2:
        inst.candidates = {Rat(-1), Rat(1)};
        inst.agents = {agent(e, true, false), agent(Rat(1), false, true)};
        break;
    case Fixture::PmmExample: {
        inst.candidates = {Rat(0), Rat(2)};
        const unsigned long x = spec.x;
        for (unsigned long i = 0; i < x + 1; ++i) inst.agents.push_back(agent(Rat(1) - e, true, false));
        for (unsigned long i = 0; i < x; ++i) inst.agents.push_back(agent(Rat(2), true, false));
        for (unsigned long i = 0; i < 2 * x + 1; ++i) inst.agents.push_back(agent(Rat(0), false, true));
        break;
    }
    case Fixture::McHomLowerI1:
        inst.candidates = {Rat(-1), Rat(0), Rat(1)};
        inst.agents = {agent(-e, true, true), agent(e, true, true)};
        break;
    case Fixture::McHomLowerI2:
        inst.candidates = {Rat(-1), Rat(0), Rat(1)};
        inst.agents = {agent(Rat(-1), true, true), agent(e, true, true)};
        break;
    case Fixture::VfpExample:
        inst.candidates = {Rat(0), Rat(2), Rat(6)};
        inst.agents = {agent(Rat(1) + e, true, false), agent(Rat(1), false, true),
                       agent(Rat(3) + e, false, true)};
        break;
    case Fixture::McGeneralLowerI1:
        inst.candidates = {Rat(-1), Rat(1)};
        inst.agents = {agent(-e, true, false), agent(e, true, false)};
        break;
    case Fixture::McGeneralLowerI2:
        inst.candidates = {Rat(-1), Rat(1)};
        inst.agents = {agent(Rat(-2), true, false), agent(e, true, false)};
        break;
    }
    inst.validate();
    return inst;
}

std::vector<Instance> schom_moving_sequence(int case_no, unsigned long n, const Rat& eps,
                                            bool duplicate_slots) {
    if (case_no < 1 || case_no > 3) throw ConfigError("moving sequence case must be 1, 2 or 3");
    FixtureSpec start{Fixture::ScHomLowerI1, eps, n, 1, duplicate_slots};
    Instance inst = build_fixture(start);
    const unsigned long left = schom_left_count(n);

    std::vector<Instance> seq;
    seq.push_back(inst);
    if (case_no == 2) {
        // Agents at 2 move one by one to 1+eps.
        const Rat target = Rat(1) + eps;
        for (unsigned long k = left; k < n; ++k) {
            inst.agents[k].position = target;
            seq.push_back(inst);
        }
    } else {
        // Agents at 0 move one by one to 1-eps (cases 1 and 3 share this).
        const Rat target = Rat(1) - eps;
        for (unsigned long k = 0; k < left; ++k) {
            inst.agents[k].position = target;
            seq.push_back(inst);
        }
    }
    return seq;
}

} // namespace facmech
