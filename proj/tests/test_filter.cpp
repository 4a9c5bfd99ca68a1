#include <doctest.h>

#include <cmath>

#include "causalfi/estimation.hpp"
#include "causalfi/filter.hpp"

using namespace causalfi;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<FeatureRecord> benchmark_records() {
    return {
        make_feature_record("dog nose", {0.84, 0.75}),
        make_feature_record("dog eyes", {0.81, 0.625}),
        make_feature_record("dog mouth", {0.775, 0.69}),
    };
}

}  // namespace

TEST_CASE("benchmark ranking by joint-interval midpoint") {
    const auto ranked = rank_features(benchmark_records(),
                                      {BoundTarget::pns, IntervalStatistic::midpoint});
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].name == "dog eyes");
    CHECK(ranked[1].name == "dog mouth");
    CHECK(ranked[2].name == "dog nose");
    CHECK(close(*ranked[0].score, 0.2800, 1e-12));
    CHECK(close(*ranked[1].score, 0.1975, 1e-12));
    CHECK(close(*ranked[2].score, 0.1700, 1e-12));
    // The two runners-up are nearly tied.
    CHECK(std::abs(*ranked[1].score - *ranked[2].score) < 0.03);
}

TEST_CASE("benchmark ranking by conservative lower bound") {
    const auto ranked =
        rank_features(benchmark_records(), {BoundTarget::pns, IntervalStatistic::lower});
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].name == "dog eyes");
    CHECK(ranked[1].name == "dog nose");
    CHECK(ranked[2].name == "dog mouth");
    CHECK(close(*ranked[0].score, 0.185, 1e-12));
}

TEST_CASE("the benchmark winner is stable across all three lower-bound criteria") {
    for (BoundTarget target : {BoundTarget::pn, BoundTarget::ps, BoundTarget::pns}) {
        const auto ranked =
            rank_features(benchmark_records(), {target, IntervalStatistic::lower});
        CHECK(ranked[0].name == "dog eyes");
    }
}

TEST_CASE("threshold selection") {
    const RankingCriterion by_lower{BoundTarget::pns, IntervalStatistic::lower};
    const auto records = benchmark_records();

    CHECK(select_features(records, by_lower, 0.1) == std::vector<std::string>{"dog eyes"});
    CHECK(select_features(records, by_lower, 0.0) ==
          std::vector<std::string>{"dog eyes", "dog nose", "dog mouth"});
    CHECK(select_features(records, by_lower, 1.0).empty());
    CHECK_THROWS_AS(select_features(records, by_lower, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(select_features(records, by_lower, 1.1), std::invalid_argument);
}

TEST_CASE("selection is monotone in the threshold") {
    const RankingCriterion criterion{BoundTarget::pns, IntervalStatistic::midpoint};
    const auto records = benchmark_records();
    std::size_t previous = records.size() + 1;
    for (double t : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.5, 1.0}) {
        const auto selected = select_features(records, criterion, t);
        CHECK(selected.size() <= previous);
        previous = selected.size();
    }
}

TEST_CASE("a single feature ranks first trivially") {
    const auto ranked = rank_features({make_feature_record("only", {0.7, 0.3})},
                                      {BoundTarget::pns, IntervalStatistic::lower});
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].name == "only");
    CHECK(ranked[0].score.has_value());
}

TEST_CASE("features with undefined targets sort last and never qualify") {
    std::vector<FeatureRecord> records = {
        make_feature_record("usable", {0.8, 0.2}),
        make_feature_record("blind", {0.0, 0.2}),  // PN undefined
    };
    const RankingCriterion by_pn{BoundTarget::pn, IntervalStatistic::lower};
    const auto ranked = rank_features(records, by_pn);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].name == "usable");
    CHECK(ranked[1].name == "blind");
    CHECK(!ranked[1].score.has_value());
    CHECK(select_features(records, by_pn, 0.0) == std::vector<std::string>{"usable"});
}

TEST_CASE("ties break by name") {
    std::vector<FeatureRecord> records = {
        make_feature_record("zeta", {0.7, 0.3}),
        make_feature_record("alpha", {0.7, 0.3}),
    };
    const auto ranked =
        rank_features(records, {BoundTarget::pns, IntervalStatistic::lower});
    CHECK(ranked[0].name == "alpha");
    CHECK(ranked[1].name == "zeta");
}

TEST_CASE("scores depend only on rates, not on arm scale") {
    const ConditionalRates small = rates_from_counts({{504, 600}, {450, 600}});
    const ConditionalRates large = rates_from_counts({{1008, 1200}, {900, 1200}});
    CHECK(small == large);
    const auto a = rank_features({make_feature_record("f", small)},
                                 {BoundTarget::pns, IntervalStatistic::midpoint});
    const auto b = rank_features({make_feature_record("f", large)},
                                 {BoundTarget::pns, IntervalStatistic::midpoint});
    CHECK(*a[0].score == *b[0].score);
}

TEST_CASE("record flags annotate direction and undefined components") {
    const FeatureRecord negative = make_feature_record("n", {0.3, 0.5});
    CHECK(negative.flags == std::vector<std::string>{"negative-effect"});

    const FeatureRecord blind = make_feature_record("b", {0.0, 0.5});
    CHECK(blind.flags == std::vector<std::string>{"negative-effect", "pn-undefined"});

    const FeatureRecord saturated = make_feature_record("s", {0.5, 1.0});
    CHECK(saturated.flags == std::vector<std::string>{"negative-effect", "ps-undefined"});

    const FeatureRecord merged =
        make_feature_record("m", {0.8, 0.2}, {"arm-label-assumed", "arm-label-assumed"});
    CHECK(merged.flags == std::vector<std::string>{"arm-label-assumed"});
}

TEST_CASE("empty record lists cannot be ranked") {
    CHECK_THROWS_AS(rank_features({}, {BoundTarget::pns, IntervalStatistic::lower}),
                    std::invalid_argument);
}
