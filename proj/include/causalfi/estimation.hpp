#pragma once

#include <cstdint>

#include "causalfi/bounds.hpp"

namespace causalfi {

// One arm of a randomized experiment.
struct ArmCounts {
    std::uint64_t recognized = 0;  // units with the outcome
    std::uint64_t total = 0;       // arm size, >= 1

    double rate() const {
        return static_cast<double>(recognized) / static_cast<double>(total);
    }

    bool operator==(const ArmCounts&) const = default;
};

void validate(const ArmCounts& arm);

// Controlled arm: feature revealed (x). Experimental arm: feature covered (x').
struct RctResult {
    ArmCounts controlled;
    ArmCounts experimental;

    bool operator==(const RctResult&) const = default;
};

void validate(const RctResult& rct);

struct RateConfidence {
    double point = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double level = 0.0;  // confidence level in (0, 1)

    bool operator==(const RateConfidence&) const = default;
};

// Quantile of the standard normal distribution. Wichura's PPND16 rational
// approximations; absolute error around 1e-15 over (0, 1).
double normal_quantile(double p);

ConditionalRates rates_from_counts(const RctResult& rct);

// Wilson score interval for a binomial proportion. Stays inside [0, 1] by
// construction; the degenerate counts k = 0 and k = n pin the matching
// endpoint to exactly 0 or 1.
RateConfidence wilson_interval(const ArmCounts& arm, double level);

// Same interval from an observed rate and arm size. Counts and rates paths
// agree bit-for-bit: the counts overload delegates here with rate = k / n.
RateConfidence wilson_interval(double rate, std::uint64_t total, double level);

// Outer envelope of the causation bounds over the uncertainty rectangle
// [p_lo, p_hi] x [q_lo, q_hi] spanned by the two rate intervals. Every bound
// endpoint is coordinate-wise monotone in (p, q), so evaluating the four
// corners and taking min-of-lowers / max-of-uppers attains the exact extrema
// over the rectangle. PN is absent when p can be 0 anywhere in the rectangle,
// PS when P(y'|x') can be.
CausationBounds bounds_envelope(const RateConfidence& controlled,
                                const RateConfidence& experimental);

// Conservative bounds for raw counts: Wilson intervals per arm, then the
// corner envelope over their rectangle.
CausationBounds bounds_with_uncertainty(const RctResult& rct, double level);

}  // namespace causalfi
