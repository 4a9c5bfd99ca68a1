#include "causalfi/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace causalfi {

void validate(const ArmCounts& arm) {
    if (arm.total < 1) {
        throw std::invalid_argument("arm total must be >= 1");
    }
    if (arm.recognized > arm.total) {
        throw std::invalid_argument("recognized count exceeds arm total");
    }
}

void validate(const RctResult& rct) {
    validate(rct.controlled);
    validate(rct.experimental);
}

namespace {

void validate_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
}

}  // namespace

// PPND16 (Wichura). Rational approximations on three ranges of
// r = sqrt(-log(min(p, 1-p))).
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal quantile needs p in (0, 1)");
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                    3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                  4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                  2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                  5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

ConditionalRates rates_from_counts(const RctResult& rct) {
    validate(rct);
    return {rct.controlled.rate(), rct.experimental.rate()};
}

RateConfidence wilson_interval(const ArmCounts& arm, double level) {
    validate(arm);
    return wilson_interval(arm.rate(), arm.total, level);
}

RateConfidence wilson_interval(double rate, std::uint64_t total, double level) {
    if (total < 1) {
        throw std::invalid_argument("arm total must be >= 1");
    }
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw std::invalid_argument("rate must lie in [0, 1]");
    }
    validate_level(level);

    const double z = normal_quantile(0.5 + level / 2.0);
    const double n = static_cast<double>(total);
    const double phat = rate;
    const double z2 = z * z;

    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));

    RateConfidence out;
    out.point = phat;
    out.level = level;
    out.ci_lower = phat == 0.0 ? 0.0 : std::max(0.0, center - half);
    out.ci_upper = phat == 1.0 ? 1.0 : std::min(1.0, center + half);
    // The score interval always contains the point estimate.
    out.ci_lower = std::min(out.ci_lower, phat);
    out.ci_upper = std::max(out.ci_upper, phat);
    return out;
}

CausationBounds bounds_envelope(const RateConfidence& controlled,
                                const RateConfidence& experimental) {
    const double p_corners[2] = {controlled.ci_lower, controlled.ci_upper};
    const double q_corners[2] = {experimental.ci_lower, experimental.ci_upper};

    const bool pn_possible = controlled.ci_lower > 0.0;
    const bool ps_possible = experimental.ci_upper < 1.0;

    CausationBounds out;
    out.pns = {1.0, 0.0};
    ProbabilityInterval pn_env{1.0, 0.0};
    ProbabilityInterval ps_env{1.0, 0.0};

    for (double p : p_corners) {
        for (double q : q_corners) {
            const ConditionalRates corner{p, q};
            const ProbabilityInterval pns = pns_interval(corner);
            out.pns.lower = std::min(out.pns.lower, pns.lower);
            out.pns.upper = std::max(out.pns.upper, pns.upper);
            if (pn_possible) {
                const ProbabilityInterval pn = pn_interval(corner);
                pn_env.lower = std::min(pn_env.lower, pn.lower);
                pn_env.upper = std::max(pn_env.upper, pn.upper);
            }
            if (ps_possible) {
                const ProbabilityInterval ps = ps_interval(corner);
                ps_env.lower = std::min(ps_env.lower, ps.lower);
                ps_env.upper = std::max(ps_env.upper, ps.upper);
            }
        }
    }

    out.pn = pn_possible ? BoundComponent::of(pn_env)
                         : BoundComponent::absent(BoundAbsence::zero_p_y_given_x);
    out.ps = ps_possible ? BoundComponent::of(ps_env)
                         : BoundComponent::absent(BoundAbsence::zero_p_yp_given_xp);
    return out;
}

CausationBounds bounds_with_uncertainty(const RctResult& rct, double level) {
    validate(rct);
    validate_level(level);
    return bounds_envelope(wilson_interval(rct.controlled, level),
                           wilson_interval(rct.experimental, level));
}

}  // namespace causalfi
