#pragma once

// Independent reference implementations used only by tests. Deliberately
// naive: correctness over speed, and no code shared with the library under
// test beyond its public types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "causalfi/bounds.hpp"
#include "causalfi/rng.hpp"
#include "causalfi/simulator.hpp"

namespace oracle {

inline double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n + 1)) -
           std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

// P(X <= k) for X ~ Binomial(n, p), summed term by term in log space.
inline double binom_cdf(std::uint64_t k, std::uint64_t n, double p) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return k >= n ? 1.0 : 0.0;
    double sum = 0.0;
    for (std::uint64_t i = 0; i <= k && i <= n; ++i) {
        sum += std::exp(log_choose(n, i) + static_cast<double>(i) * std::log(p) +
                        static_cast<double>(n - i) * std::log1p(-p));
    }
    return std::min(sum, 1.0);
}

// Clopper-Pearson interval by bisection on the binomial tails.
inline std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n,
                                                 double level) {
    const double alpha = 1.0 - level;
    double lo = 0.0;
    double hi = 1.0;
    if (k > 0) {
        // lower endpoint: P(X >= k | p) = alpha / 2, increasing in p
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (a + b);
            if (1.0 - binom_cdf(k - 1, n, m) < alpha / 2.0) {
                a = m;
            } else {
                b = m;
            }
        }
        lo = 0.5 * (a + b);
    }
    if (k < n) {
        // upper endpoint: P(X <= k | p) = alpha / 2, decreasing in p
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (a + b);
            if (binom_cdf(k, n, m) > alpha / 2.0) {
                a = m;
            } else {
                b = m;
            }
        }
        hi = 0.5 * (a + b);
    }
    return {lo, hi};
}

// Brute-force bounds envelope over a (steps+1) x (steps+1) grid on the
// rectangle [p_lo, p_hi] x [q_lo, q_hi].
inline causalfi::CausationBounds grid_envelope(double p_lo, double p_hi, double q_lo,
                                               double q_hi, std::size_t steps) {
    using namespace causalfi;
    const bool pn_possible = p_lo > 0.0;
    const bool ps_possible = q_hi < 1.0;

    CausationBounds out;
    out.pns = {1.0, 0.0};
    ProbabilityInterval pn_env{1.0, 0.0};
    ProbabilityInterval ps_env{1.0, 0.0};

    for (std::size_t i = 0; i <= steps; ++i) {
        const double p =
            p_lo + (p_hi - p_lo) * static_cast<double>(i) / static_cast<double>(steps);
        for (std::size_t j = 0; j <= steps; ++j) {
            const double q =
                q_lo + (q_hi - q_lo) * static_cast<double>(j) / static_cast<double>(steps);
            const ConditionalRates rates{p, q};
            const ProbabilityInterval pns = pns_interval(rates);
            out.pns.lower = std::min(out.pns.lower, pns.lower);
            out.pns.upper = std::max(out.pns.upper, pns.upper);
            if (pn_possible) {
                const ProbabilityInterval pn = pn_interval(rates);
                pn_env.lower = std::min(pn_env.lower, pn.lower);
                pn_env.upper = std::max(pn_env.upper, pn.upper);
            }
            if (ps_possible) {
                const ProbabilityInterval ps = ps_interval(rates);
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

// Uniform point on the 4-simplex (exponential spacings), with the last mass
// forced to the exact residual so validate() always accepts it.
inline causalfi::ResponseDistribution random_distribution(causalfi::SplitMix64& rng) {
    double e[4];
    double total = 0.0;
    for (double& x : e) {
        x = -std::log(1.0 - rng.next_double());
        total += x;
    }
    causalfi::ResponseDistribution d;
    d.always = e[0] / total;
    d.causative = e[1] / total;
    d.preventive = e[2] / total;
    d.never = std::max(0.0, 1.0 - d.always - d.causative - d.preventive);
    return d;
}

// Same, restricted to the monotone face (no preventive mass).
inline causalfi::ResponseDistribution random_monotone(causalfi::SplitMix64& rng) {
    double e[3];
    double total = 0.0;
    for (double& x : e) {
        x = -std::log(1.0 - rng.next_double());
        total += x;
    }
    causalfi::ResponseDistribution d;
    d.always = e[0] / total;
    d.causative = e[1] / total;
    d.preventive = 0.0;
    d.never = std::max(0.0, 1.0 - d.always - d.causative);
    return d;
}

}  // namespace oracle
