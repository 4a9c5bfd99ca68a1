#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace causalfi {

// Recognition rates from a randomized experiment: the feature revealed (x)
// versus covered (x'). Under randomized assignment these equal the causal
// recognition probabilities. Complements are derived, never stored.
struct ConditionalRates {
    double p_y_given_x = 0.0;   // P(y|x)
    double p_y_given_xp = 0.0;  // P(y|x')

    double p_yp_given_x() const { return 1.0 - p_y_given_x; }
    double p_yp_given_xp() const { return 1.0 - p_y_given_xp; }

    bool operator==(const ConditionalRates&) const = default;
};

// Throws std::invalid_argument unless both rates lie in [0, 1].
void validate(const ConditionalRates& rates);

// Closed subinterval of [0, 1].
struct ProbabilityInterval {
    double lower = 0.0;
    double upper = 0.0;

    double width() const { return upper - lower; }
    double midpoint() const { return 0.5 * (lower + upper); }
    bool contains(double v) const { return lower <= v && v <= upper; }

    bool operator==(const ProbabilityInterval&) const = default;
};

void validate(const ProbabilityInterval& interval);

// Why a PN or PS component does not exist for the given rates.
enum class BoundAbsence {
    zero_p_y_given_x,    // P(y|x) = 0: no recognized-with-feature units
    zero_p_yp_given_xp,  // P(y'|x') = 0: no unrecognized-without-feature units
};

// Machine slug, e.g. "zero_p_y_given_x".
std::string to_string(BoundAbsence reason);
// Short human form, e.g. "P(y|x) = 0".
std::string describe(BoundAbsence reason);

class UndefinedBoundError : public std::domain_error {
public:
    explicit UndefinedBoundError(BoundAbsence reason);
    BoundAbsence reason() const { return reason_; }

private:
    BoundAbsence reason_;
};

// A PN or PS interval, or the reason it is absent.
struct BoundComponent {
    std::optional<ProbabilityInterval> interval;
    std::optional<BoundAbsence> absence;

    bool defined() const { return interval.has_value(); }

    static BoundComponent of(ProbabilityInterval iv) { return {iv, std::nullopt}; }
    static BoundComponent absent(BoundAbsence reason) { return {std::nullopt, reason}; }

    bool operator==(const BoundComponent&) const = default;
};

// The necessity / sufficiency / joint interval triple for one feature.
// PNS always exists; PN and PS go absent when their conditioning event has
// probability zero.
struct CausationBounds {
    BoundComponent pn;
    BoundComponent ps;
    ProbabilityInterval pns;

    bool operator==(const CausationBounds&) const = default;
};

// PNS is bounded by [max(0, p - p'), min(p, 1 - p')] where p = P(y|x) and
// p' = P(y|x'). Total on valid rates: the lower endpoint never exceeds the
// upper one.
ProbabilityInterval pns_interval(const ConditionalRates& rates);

// PN: the PNS endpoints divided by P(y|x), clamped to [0, 1].
// Throws UndefinedBoundError when P(y|x) = 0.
ProbabilityInterval pn_interval(const ConditionalRates& rates);

// PS: the PNS endpoints divided by P(y'|x'), clamped to [0, 1].
// Throws UndefinedBoundError when P(y'|x') = 0.
ProbabilityInterval ps_interval(const ConditionalRates& rates);

// The full triple. Never throws on valid rates: undefined PN/PS come back as
// absent components carrying their reason, and PNS is always produced.
CausationBounds causation_bounds(const ConditionalRates& rates);

// Point values valid only under a monotonicity assumption the caller asserts
// (no unit loses the outcome when the feature appears). Each probability of
// causation then collapses to its interval's lower endpoint.
struct PointEstimates {
    double pn = 0.0;
    double ps = 0.0;
    double pns = 0.0;
};

PointEstimates monotone_point_estimates(const ConditionalRates& rates);

}  // namespace causalfi
