#include "causalfi/filter.hpp"

#include <algorithm>

namespace causalfi {

std::string to_string(BoundTarget target) {
    switch (target) {
        case BoundTarget::pn: return "pn";
        case BoundTarget::ps: return "ps";
        case BoundTarget::pns: return "pns";
    }
    return "unknown";
}

std::string to_string(IntervalStatistic statistic) {
    switch (statistic) {
        case IntervalStatistic::lower: return "lower";
        case IntervalStatistic::upper: return "upper";
        case IntervalStatistic::midpoint: return "midpoint";
    }
    return "unknown";
}

FeatureRecord make_feature_record(std::string name, const ConditionalRates& rates,
                                  std::vector<std::string> extra_flags) {
    FeatureRecord record;
    record.name = std::move(name);
    record.rates = rates;
    record.bounds = causation_bounds(rates);
    record.flags = std::move(extra_flags);
    if (rates.p_y_given_x < rates.p_y_given_xp) {
        record.flags.push_back("negative-effect");
    }
    if (!record.bounds.pn.defined()) {
        record.flags.push_back("pn-undefined");
    }
    if (!record.bounds.ps.defined()) {
        record.flags.push_back("ps-undefined");
    }
    std::sort(record.flags.begin(), record.flags.end());
    record.flags.erase(std::unique(record.flags.begin(), record.flags.end()),
                       record.flags.end());
    return record;
}

std::optional<ProbabilityInterval> target_interval(const CausationBounds& bounds,
                                                   BoundTarget target) {
    switch (target) {
        case BoundTarget::pn: return bounds.pn.interval;
        case BoundTarget::ps: return bounds.ps.interval;
        case BoundTarget::pns: return bounds.pns;
    }
    return std::nullopt;
}

double statistic_of(const ProbabilityInterval& interval, IntervalStatistic statistic) {
    switch (statistic) {
        case IntervalStatistic::lower: return interval.lower;
        case IntervalStatistic::upper: return interval.upper;
        case IntervalStatistic::midpoint: return interval.midpoint();
    }
    return 0.0;
}

std::vector<RankedFeature> rank_features(const std::vector<FeatureRecord>& records,
                                         const RankingCriterion& criterion) {
    if (records.empty()) {
        throw std::invalid_argument("no features to rank");
    }
    std::vector<RankedFeature> ranked;
    ranked.reserve(records.size());
    for (const FeatureRecord& record : records) {
        const auto interval = target_interval(record.bounds, criterion.target);
        ranked.push_back({record.name,
                          interval ? std::optional<double>(statistic_of(*interval, criterion.statistic))
                                   : std::nullopt});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
        if (a.score.has_value() != b.score.has_value()) {
            return a.score.has_value();  // defined scores first
        }
        if (a.score && b.score && *a.score != *b.score) {
            return *a.score > *b.score;
        }
        return a.name < b.name;
    });
    return ranked;
}

std::vector<std::string> select_features(const std::vector<FeatureRecord>& records,
                                         const RankingCriterion& criterion,
                                         double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }
    std::vector<std::string> selected;
    for (const RankedFeature& ranked : rank_features(records, criterion)) {
        if (ranked.score && *ranked.score >= threshold) {
            selected.push_back(ranked.name);
        }
    }
    return selected;
}

}  // namespace causalfi
