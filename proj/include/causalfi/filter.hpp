#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalfi/bounds.hpp"

namespace causalfi {

enum class BoundTarget { pn, ps, pns };
enum class IntervalStatistic { lower, upper, midpoint };

std::string to_string(BoundTarget target);
std::string to_string(IntervalStatistic statistic);

// What to score a feature by: which causation component, and which scalar of
// its interval. The lower bound is the conservative default: it is the only
// statistic guaranteed not to exceed the true value.
struct RankingCriterion {
    BoundTarget target = BoundTarget::pns;
    IntervalStatistic statistic = IntervalStatistic::lower;

    bool operator==(const RankingCriterion&) const = default;
};

// One feature's rates, bounds, and annotations. `bounds` is always
// causation_bounds(rates); it is stored so reports need not recompute.
struct FeatureRecord {
    std::string name;
    ConditionalRates rates;
    CausationBounds bounds;
    std::vector<std::string> flags;  // sorted, deduplicated

    bool operator==(const FeatureRecord&) const = default;
};

// Builds the record and the standard annotations: "negative-effect" when
// P(y|x) < P(y|x'), "pn-undefined" / "ps-undefined" for absent components.
FeatureRecord make_feature_record(std::string name, const ConditionalRates& rates,
                                  std::vector<std::string> extra_flags = {});

std::optional<ProbabilityInterval> target_interval(const CausationBounds& bounds,
                                                   BoundTarget target);
double statistic_of(const ProbabilityInterval& interval, IntervalStatistic statistic);

struct RankedFeature {
    std::string name;
    std::optional<double> score;  // absent when the target component is undefined

    bool operator==(const RankedFeature&) const = default;
};

// Descending by score, ties broken by ascending name. Features whose target
// component is undefined sort last (by name) with an absent score, so one
// degenerate feature cannot abort a batch. Throws std::invalid_argument on an
// empty record list.
std::vector<RankedFeature> rank_features(const std::vector<FeatureRecord>& records,
                                         const RankingCriterion& criterion);

// Names whose criterion score is >= threshold, in rank order. Features with
// absent scores never qualify.
std::vector<std::string> select_features(const std::vector<FeatureRecord>& records,
                                         const RankingCriterion& criterion,
                                         double threshold);

}  // namespace causalfi
