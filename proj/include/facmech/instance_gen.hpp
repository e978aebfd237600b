#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"

namespace facmech {

enum class GenKind {
    UniformHomogeneous,  // all agents approve both facilities
    UniformGeneral,      // prefs uniform over {F1, F2, both}; N1 and N2 nonempty
    SingletonPreferences,// each agent approves exactly one; both sides present
    Clustered,           // positions drawn around a few cluster centers
    Duplication,         // base instance with each agent replicated `copies` times
};

struct GenParams {
    unsigned n_max = 8;  // agents drawn uniformly in [n_min, n_max]
    unsigned m_max = 6;  // candidate count drawn uniformly in [2, m_max]
    long span = 8;       // coordinate numerators drawn in [-span, span]
    unsigned q_max = 16; // coordinate denominators drawn in [1, q_max]
};

struct GeneratorSpec {
    GenKind kind = GenKind::UniformHomogeneous;
    GenParams params{};
    GenKind base = GenKind::UniformHomogeneous; // Duplication only
    unsigned copies = 2;                        // Duplication only

    /// Stable CLI identifier, e.g.
    /// "uniform-homogeneous?n=8&m=6&span=8&qmax=16".
    std::string str() const;

    /// Accepts an optional "gen:" prefix and a query-string parameter
    /// suffix (n, m, span, qmax; base and copies for duplication).
    static GeneratorSpec parse(std::string_view text);
};

/// Deterministic per seed: same spec and seed, same instance. Candidate
/// coordinates are distinct (candidate locations form a set; duplicate
/// slots are a fixture-only device). Agent positions may coincide.
Instance generate(const GeneratorSpec& gen, std::uint64_t seed);

/// Per-trial stream derivation, so sweep results are order-independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial);

/// Throws ConfigError when the generator cannot reach the mechanism's
/// domain (e.g. a singleton-preference generator with a homogeneous-only
/// mechanism).
void check_generator_compat(const GeneratorSpec& gen, const MechanismId& mech);

/// Rejection-samples instances from `gen` until one lies in the
/// mechanism's domain. Deterministic per seed.
Instance generate_for_mechanism(const GeneratorSpec& gen, const MechanismId& mech,
                                std::uint64_t seed);

/// Exact reproductions of the instance families from the worst-case
/// constructions and counterexamples.
enum class Fixture {
    MedianTight,
    ScHomLowerI1,
    ScHomLowerCase1End,
    ScHomLowerCase2End,
    ScHomLowerCase3End,
    ScGeneralLowerI1,
    ScGeneralLowerI2,
    PmmExample,
    McHomLowerI1,
    McHomLowerI2,
    VfpExample,
    McGeneralLowerI1,
    McGeneralLowerI2,
};

struct FixtureSpec {
    Fixture id = Fixture::MedianTight;
    Rat eps{1, 1000};
    unsigned long n = 100;        // ScHomLower* only
    unsigned long x = 100;        // PmmExample only
    bool duplicate_slots = false; // ScHomLower*: coincident candidate pairs at 0 and 2

    std::string str() const;

    /// Accepts an optional "fixture:" prefix and a query suffix
    /// (eps=p/q, n=, x=, dup=0|1), e.g. "median-tight?eps=1/1000".
    static FixtureSpec parse(std::string_view text);
};

/// Builds the exact instance. Requires eps in (0, 1/8) and n, x >= 1;
/// violations raise ConfigError.
Instance build_fixture(const FixtureSpec& spec);

/// The instance sequence behind the homogeneous social-cost lower bound:
/// step k has k agents moved one by one from their start to the interior
/// point (0 -> 1-eps for cases 1 and 3, 2 -> 1+eps for case 2). Step 0 is
/// the initial instance.
std::vector<Instance> schom_moving_sequence(int case_no, unsigned long n, const Rat& eps,
                                            bool duplicate_slots);

} // namespace facmech
