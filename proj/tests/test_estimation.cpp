#include <doctest.h>

#include <cmath>

#include "causalfi/estimation.hpp"
#include "causalfi/rng.hpp"
#include "oracles.hpp"

using namespace causalfi;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("counts reduce to the exact benchmark rates") {
    const RctResult nose{{504, 600}, {450, 600}};
    const ConditionalRates r = rates_from_counts(nose);
    CHECK(r.p_y_given_x == 0.84);
    CHECK(r.p_y_given_xp == 0.75);

    CHECK(rates_from_counts({{486, 600}, {375, 600}}) == ConditionalRates{0.81, 0.625});
    CHECK(rates_from_counts({{465, 600}, {414, 600}}) == ConditionalRates{0.775, 0.69});
}

TEST_CASE("count validation") {
    CHECK_THROWS_AS(validate(ArmCounts{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ArmCounts{7, 6}), std::invalid_argument);
    CHECK_NOTHROW(validate(ArmCounts{0, 1}));
    CHECK_THROWS_AS(rates_from_counts({{504, 600}, {601, 600}}), std::invalid_argument);
}

TEST_CASE("normal quantile matches frozen reference values") {
    // Frozen against an independent statistical library.
    CHECK(close(normal_quantile(0.975), 1.959963984540054, 1e-12));
    CHECK(close(normal_quantile(0.995), 2.5758293035489004, 1e-12));
    CHECK(close(normal_quantile(0.95), 1.6448536269514722, 1e-12));
    CHECK(close(normal_quantile(0.75), 0.6744897501960817, 1e-12));
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(close(normal_quantile(0.025), -1.959963984540054, 1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("score interval on the benchmark arm") {
    const RateConfidence ci = wilson_interval(ArmCounts{504, 600}, 0.95);
    // Frozen against an independent statistical library.
    CHECK(close(ci.ci_lower, 0.8085165, 1e-6));
    CHECK(close(ci.ci_upper, 0.8671575, 1e-6));
    CHECK(ci.point == 0.84);
    CHECK(ci.ci_lower <= ci.point);
    CHECK(ci.point <= ci.ci_upper);
    CHECK(ci.ci_upper - ci.ci_lower < 0.07);
}

TEST_CASE("degenerate counts pin the matching endpoint") {
    const RateConfidence none = wilson_interval(ArmCounts{0, 100}, 0.95);
    CHECK(none.ci_lower == 0.0);
    CHECK(none.ci_upper > 0.0);
    CHECK(none.ci_upper < 0.05);

    const RateConfidence all = wilson_interval(ArmCounts{100, 100}, 0.95);
    CHECK(all.ci_upper == 1.0);
    CHECK(all.ci_lower < 1.0);
    CHECK(all.ci_lower > 0.95);
}

TEST_CASE("rate overload agrees bit-for-bit with the counts overload") {
    SplitMix64 rng(4242);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t n = 1 + rng.next_below(2000);
        const std::uint64_t k = rng.next_below(n + 1);
        const ArmCounts arm{k, n};
        const RateConfidence a = wilson_interval(arm, 0.95);
        const RateConfidence b = wilson_interval(arm.rate(), n, 0.95);
        CHECK(a == b);
    }
    CHECK_THROWS_AS(wilson_interval(0.5, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(1.5, 10, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(0.5, 10, 1.0), std::invalid_argument);
}

TEST_CASE("score interval tracks an exact-tail oracle") {
    // The score and exact-tail constructions differ, but at matching level
    // their endpoints agree to well within these tolerances.
    const std::uint64_t ns[] = {10, 600};
    const double tol[] = {0.06, 0.005};
    for (int t = 0; t < 2; ++t) {
        const std::uint64_t n = ns[t];
        for (std::uint64_t k : {std::uint64_t{0}, n / 4, n / 2, n - 1, n}) {
            CAPTURE(n);
            CAPTURE(k);
            const RateConfidence w = wilson_interval(ArmCounts{k, n}, 0.95);
            const auto [cp_lo, cp_hi] = oracle::clopper_pearson(k, n, 0.95);
            CHECK(close(w.ci_lower, cp_lo, tol[t]));
            CHECK(close(w.ci_upper, cp_hi, tol[t]));
        }
    }
}

TEST_CASE("higher confidence widens the interval") {
    const ArmCounts arm{504, 600};
    const RateConfidence c50 = wilson_interval(arm, 0.50);
    const RateConfidence c95 = wilson_interval(arm, 0.95);
    const RateConfidence c99 = wilson_interval(arm, 0.99);
    CHECK(c99.ci_lower < c95.ci_lower);
    CHECK(c95.ci_lower < c50.ci_lower);
    CHECK(c50.ci_upper < c95.ci_upper);
    CHECK(c95.ci_upper < c99.ci_upper);
}

TEST_CASE("zero-width rate intervals reproduce the point bounds exactly") {
    SplitMix64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const double p = rng.next_double();
        const double q = rng.next_double();
        const RateConfidence cp{p, p, p, 0.95};
        const RateConfidence cq{q, q, q, 0.95};
        CHECK(bounds_envelope(cp, cq) == causation_bounds({p, q}));
    }
}

TEST_CASE("benchmark envelope strictly contains the point interval") {
    const RateConfidence controlled = wilson_interval(ArmCounts{486, 600}, 0.95);
    const RateConfidence experimental = wilson_interval(ArmCounts{375, 600}, 0.95);
    const CausationBounds env = bounds_envelope(controlled, experimental);
    // Frozen against an independent four-corner evaluation.
    CHECK(close(env.pns.lower, 0.11385, 1e-4));
    CHECK(close(env.pns.upper, 0.41442, 1e-4));
    CHECK(env.pns.lower < 0.185);
    CHECK(env.pns.upper > 0.375);
}

TEST_CASE("tiny arms lose the effect signal") {
    // 1/2 successes in both arms: the rate rectangles overlap completely, so
    // the envelope cannot exclude a null effect.
    const CausationBounds env = bounds_with_uncertainty({{1, 2}, {1, 2}}, 0.95);
    CHECK(env.pns.lower == 0.0);
}

TEST_CASE("envelope contains the point bounds for random count tables") {
    SplitMix64 rng(991);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t nc = 1 + rng.next_below(500);
        const std::uint64_t ne = 1 + rng.next_below(500);
        const RctResult rct{{rng.next_below(nc + 1), nc}, {rng.next_below(ne + 1), ne}};
        CAPTURE(rct.controlled.recognized);
        CAPTURE(rct.controlled.total);
        CAPTURE(rct.experimental.recognized);
        CAPTURE(rct.experimental.total);

        const CausationBounds point = causation_bounds(rates_from_counts(rct));
        const CausationBounds env = bounds_with_uncertainty(rct, 0.95);

        CHECK(env.pns.lower <= point.pns.lower + 1e-12);
        CHECK(env.pns.upper >= point.pns.upper - 1e-12);
        if (point.pn.defined()) {
            REQUIRE(env.pn.defined());
            CHECK(env.pn.interval->lower <= point.pn.interval->lower + 1e-12);
            CHECK(env.pn.interval->upper >= point.pn.interval->upper - 1e-12);
        }
        if (point.ps.defined()) {
            REQUIRE(env.ps.defined());
            CHECK(env.ps.interval->lower <= point.ps.interval->lower + 1e-12);
            CHECK(env.ps.interval->upper >= point.ps.interval->upper - 1e-12);
        }
    }
}

TEST_CASE("four corners attain the same envelope as a dense grid") {
    SplitMix64 rng(31415);
    const std::size_t steps = 50;
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t nc = 5 + rng.next_below(995);
        const std::uint64_t ne = 5 + rng.next_below(995);
        const RctResult rct{{rng.next_below(nc + 1), nc}, {rng.next_below(ne + 1), ne}};
        const RateConfidence cc = wilson_interval(rct.controlled, 0.95);
        const RateConfidence ce = wilson_interval(rct.experimental, 0.95);

        const CausationBounds corner = bounds_envelope(cc, ce);
        const CausationBounds grid = oracle::grid_envelope(cc.ci_lower, cc.ci_upper,
                                                           ce.ci_lower, ce.ci_upper, steps);

        const double step_p = (cc.ci_upper - cc.ci_lower) / static_cast<double>(steps);
        const double step_q = (ce.ci_upper - ce.ci_lower) / static_cast<double>(steps);

        // The grid envelope can never exceed the corner envelope...
        CHECK(corner.pns.lower <= grid.pns.lower + 1e-12);
        CHECK(corner.pns.upper >= grid.pns.upper - 1e-12);
        // ...and the corner envelope is attained within grid resolution.
        CHECK(close(corner.pns.lower, grid.pns.lower, step_p + step_q + 1e-9));
        CHECK(close(corner.pns.upper, grid.pns.upper, step_p + step_q + 1e-9));

        if (corner.pn.defined()) {
            REQUIRE(grid.pn.defined());
            const double lip = 1.0 / (cc.ci_lower * cc.ci_lower);
            const double tol = lip * (step_p + step_q) + 1e-9;
            CHECK(corner.pn.interval->lower <= grid.pn.interval->lower + 1e-12);
            CHECK(corner.pn.interval->upper >= grid.pn.interval->upper - 1e-12);
            CHECK(close(corner.pn.interval->lower, grid.pn.interval->lower, tol));
            CHECK(close(corner.pn.interval->upper, grid.pn.interval->upper, tol));
        }
        if (corner.ps.defined()) {
            REQUIRE(grid.ps.defined());
            const double d = 1.0 - ce.ci_upper;
            const double tol = (step_p + step_q) / (d * d) + 1e-9;
            CHECK(corner.ps.interval->lower <= grid.ps.interval->lower + 1e-12);
            CHECK(corner.ps.interval->upper >= grid.ps.interval->upper - 1e-12);
            CHECK(close(corner.ps.interval->lower, grid.ps.interval->lower, tol));
            CHECK(close(corner.ps.interval->upper, grid.ps.interval->upper, tol));
        }
    }
}

TEST_CASE("uncertain zero rates drop the matching component") {
    const CausationBounds no_controlled = bounds_with_uncertainty({{0, 50}, {20, 50}}, 0.95);
    CHECK(!no_controlled.pn.defined());
    CHECK(*no_controlled.pn.absence == BoundAbsence::zero_p_y_given_x);
    CHECK(no_controlled.ps.defined());

    const CausationBounds all_experimental =
        bounds_with_uncertainty({{20, 50}, {50, 50}}, 0.95);
    CHECK(!all_experimental.ps.defined());
    CHECK(*all_experimental.ps.absence == BoundAbsence::zero_p_yp_given_xp);
    CHECK(all_experimental.pn.defined());
}
