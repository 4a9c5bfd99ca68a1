#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "causalfi/bounds.hpp"
#include "causalfi/estimation.hpp"

namespace causalfi {

// A unit's joint counterfactual outcome pair (y_x, y_x'): what happens with
// the feature revealed, and what happens with it covered. Ground truth that
// no real experiment observes, and the simulator's primitive.
enum class ResponseType : std::uint8_t {
    always,      // (1, 1): recognized either way
    causative,   // (1, 0): recognized only with the feature
    preventive,  // (0, 1): recognized only without the feature
    never,       // (0, 0)
};

inline bool outcome_with_feature(ResponseType t) {
    return t == ResponseType::always || t == ResponseType::causative;
}
inline bool outcome_without_feature(ResponseType t) {
    return t == ResponseType::always || t == ResponseType::preventive;
}

// Population-level mix of response types; a point on the 4-simplex.
struct ResponseDistribution {
    double always = 0.0;
    double causative = 0.0;
    double preventive = 0.0;
    double never = 0.0;

    bool operator==(const ResponseDistribution&) const = default;
};

// Throws std::invalid_argument unless all masses lie in [0, 1] and sum to 1
// within 1e-12. The message carries the offending sum.
void validate(const ResponseDistribution& dist);

using Population = std::vector<ResponseType>;

// Exact probabilities of causation for a response-type mix:
//   PNS = P(causative)
//   PN  = P(causative) / P(outcome with feature)     -- among (x, y) units
//   PS  = P(causative) / P(no outcome without feature)
// PN and PS throw UndefinedBoundError when their denominator is zero.
double ground_truth_pns(const ResponseDistribution& dist);
double ground_truth_pn(const ResponseDistribution& dist);
double ground_truth_ps(const ResponseDistribution& dist);

struct GroundTruths {
    std::optional<double> pn;
    std::optional<double> ps;
    double pns = 0.0;
};

GroundTruths ground_truths(const ResponseDistribution& dist);

// The arm rates a randomized experiment targets:
//   P(y|x) = always + causative, P(y|x') = always + preventive.
// Exogeneity holds by construction under random assignment.
ConditionalRates exact_rates(const ResponseDistribution& dist);

// True iff the mix has no preventive mass (within 1e-12): the feature never
// destroys an outcome that would occur without it. Collapses every causation
// interval to its lower endpoint.
bool is_monotone(const ResponseDistribution& dist);

// n units drawn i.i.d. from the mix. Deterministic given (dist, n, seed).
Population sample_population(const ResponseDistribution& dist, std::size_t n,
                             std::uint64_t seed);

class EmptyArmError : public std::runtime_error {
public:
    explicit EmptyArmError(const std::string& what) : std::runtime_error(what) {}
};

struct RctConfig {
    std::size_t population_size = 0;   // >= 2
    double treated_fraction = 0.5;     // probability of the revealed arm, in (0, 1)
    std::uint64_t seed = 0;
    bool fixed_arms = false;           // exact shuffle split instead of Bernoulli
    bool paired = false;               // fixed-arms only: read y_x and y_x' from the same units
};

void validate(const RctConfig& cfg);

// Randomized experiment over a population. Bernoulli mode assigns each unit
// to the revealed arm independently; fixed-arms mode shuffles and splits at
// round(fraction * n); paired mode reads both potential outcomes from every
// unit (both arms then have size n). Deterministic given cfg.seed. Throws
// EmptyArmError when assignment leaves an arm empty.
RctResult run_rct(const Population& pop, const RctConfig& cfg);

// Convenience: sample a population of cfg.population_size and run the RCT,
// with the sampling and assignment streams derived from cfg.seed.
RctResult simulate_rct(const ResponseDistribution& dist, const RctConfig& cfg);

// Repeated sample + RCT + Wilson-envelope sweep, counting how often the
// envelope contains each defined ground truth. Replication r draws from seed
// streams derive_seed(seed, 2r) and derive_seed(seed, 2r + 1), so the result
// does not depend on how replications are scheduled across threads.
struct CoverageConfig {
    std::size_t population_size = 0;
    double treated_fraction = 0.5;
    bool fixed_arms = false;
    bool paired = false;
    std::size_t replications = 0;
    double confidence_level = 0.95;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: one per hardware thread
};

struct CoverageResult {
    std::size_t replications = 0;
    std::size_t pn_contained = 0;   // replications whose envelope holds the PN truth
    std::size_t ps_contained = 0;
    std::size_t pns_contained = 0;
    std::size_t all_contained = 0;  // every defined truth inside its envelope

    double all_rate() const {
        return static_cast<double>(all_contained) / static_cast<double>(replications);
    }
};

CoverageResult coverage_study(const ResponseDistribution& dist, const CoverageConfig& cfg);

}  // namespace causalfi
