#include "causalfi/bounds.hpp"

#include <algorithm>

namespace causalfi {

namespace {

// Division by a probability can land an ulp above 1; intervals are
// probabilities, so endpoints are pinned back into [0, 1].
double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

ProbabilityInterval scale_endpoints(const ProbabilityInterval& iv, double denominator) {
    return {clamp01(iv.lower / denominator), clamp01(iv.upper / denominator)};
}

}  // namespace

void validate(const ConditionalRates& rates) {
    const bool ok = rates.p_y_given_x >= 0.0 && rates.p_y_given_x <= 1.0 &&
                    rates.p_y_given_xp >= 0.0 && rates.p_y_given_xp <= 1.0;
    if (!ok) {
        throw std::invalid_argument("conditional rates must lie in [0, 1]");
    }
}

void validate(const ProbabilityInterval& interval) {
    const bool ok = interval.lower >= 0.0 && interval.lower <= interval.upper &&
                    interval.upper <= 1.0;
    if (!ok) {
        throw std::invalid_argument("interval endpoints must satisfy 0 <= lower <= upper <= 1");
    }
}

std::string to_string(BoundAbsence reason) {
    switch (reason) {
        case BoundAbsence::zero_p_y_given_x: return "zero_p_y_given_x";
        case BoundAbsence::zero_p_yp_given_xp: return "zero_p_yp_given_xp";
    }
    return "unknown";
}

std::string describe(BoundAbsence reason) {
    switch (reason) {
        case BoundAbsence::zero_p_y_given_x: return "P(y|x) = 0";
        case BoundAbsence::zero_p_yp_given_xp: return "P(y'|x') = 0";
    }
    return "unknown";
}

UndefinedBoundError::UndefinedBoundError(BoundAbsence reason)
    : std::domain_error(reason == BoundAbsence::zero_p_y_given_x
                            ? "PN is undefined: P(y|x) = 0"
                            : "PS is undefined: P(y'|x') = 0"),
      reason_(reason) {}

ProbabilityInterval pns_interval(const ConditionalRates& rates) {
    validate(rates);
    const double p = rates.p_y_given_x;
    const double pp = rates.p_y_given_xp;
    return {std::max(0.0, p - pp), std::min(p, 1.0 - pp)};
}

ProbabilityInterval pn_interval(const ConditionalRates& rates) {
    validate(rates);
    if (rates.p_y_given_x == 0.0) {
        throw UndefinedBoundError(BoundAbsence::zero_p_y_given_x);
    }
    return scale_endpoints(pns_interval(rates), rates.p_y_given_x);
}

ProbabilityInterval ps_interval(const ConditionalRates& rates) {
    validate(rates);
    if (rates.p_yp_given_xp() == 0.0) {
        throw UndefinedBoundError(BoundAbsence::zero_p_yp_given_xp);
    }
    return scale_endpoints(pns_interval(rates), rates.p_yp_given_xp());
}

CausationBounds causation_bounds(const ConditionalRates& rates) {
    validate(rates);
    CausationBounds out;
    out.pns = pns_interval(rates);
    out.pn = rates.p_y_given_x > 0.0
                 ? BoundComponent::of(pn_interval(rates))
                 : BoundComponent::absent(BoundAbsence::zero_p_y_given_x);
    out.ps = rates.p_yp_given_xp() > 0.0
                 ? BoundComponent::of(ps_interval(rates))
                 : BoundComponent::absent(BoundAbsence::zero_p_yp_given_xp);
    return out;
}

PointEstimates monotone_point_estimates(const ConditionalRates& rates) {
    return {pn_interval(rates).lower, ps_interval(rates).lower, pns_interval(rates).lower};
}

}  // namespace causalfi
