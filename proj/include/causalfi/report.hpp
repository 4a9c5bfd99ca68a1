#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "causalfi/filter.hpp"
#include "causalfi/input.hpp"
#include "causalfi/simulator.hpp"

namespace causalfi {

enum class OutputFormat { table, csv, json };

std::optional<OutputFormat> parse_output_format(const std::string& name);

// Corner envelope of the bounds over the Wilson rectangle at `level`.
struct UncertaintyEnvelope {
    CausationBounds bounds;
    double level = 0.0;

    bool operator==(const UncertaintyEnvelope&) const = default;
};

// One feature's full report line. Round-trips losslessly through the JSON
// output format, and the rate fields re-ingest as a rates-schema input.
struct ReportRow {
    std::string feature;
    ConditionalRates rates;
    std::optional<std::uint64_t> arm_size_controlled;
    std::optional<std::uint64_t> arm_size_experimental;
    CausationBounds bounds;
    std::optional<UncertaintyEnvelope> envelope;
    std::vector<std::string> flags;  // sorted, deduplicated

    bool operator==(const ReportRow&) const = default;
};

// Bounds, flags, and (when `confidence` is set) the Wilson envelope for one
// ingested feature. Throws std::invalid_argument when confidence is requested
// but the feature carries no arm sizes.
ReportRow make_report_row(const FeatureInput& input, std::optional<double> confidence);

// Shortest decimal form that parses back to the same double ("full
// precision" in machine formats).
std::string format_double(double v);
// Three decimals, round-half-to-even, for the human table.
std::string format_fixed3(double v);

void write_bounds_report(std::ostream& out, const std::vector<ReportRow>& rows,
                         OutputFormat format);

// Inverse of the JSON bounds report; ReportRow equality is exact.
std::vector<ReportRow> report_rows_from_json(const std::string& text,
                                             const std::string& origin);

struct RankReportRow {
    std::size_t rank = 0;  // 1-based
    std::string name;
    std::optional<double> score;
    std::optional<ProbabilityInterval> interval;  // the criterion's target interval
    std::vector<std::string> flags;

    bool operator==(const RankReportRow&) const = default;
};

struct RankReport {
    RankingCriterion criterion;
    std::optional<double> threshold;
    std::vector<RankReportRow> rows;
    std::vector<std::string> selected;  // meaningful only when threshold is set

    bool operator==(const RankReport&) const = default;
};

RankReport make_rank_report(const std::vector<FeatureRecord>& records,
                            const RankingCriterion& criterion,
                            std::optional<double> threshold);

void write_rank_report(std::ostream& out, const RankReport& report, OutputFormat format);

// One simulated distribution: exact truths against exact-rate bounds, plus
// the sampling coverage study when replications were requested.
struct SimulationRow {
    std::string name;
    ResponseDistribution dist;
    ConditionalRates rates;  // exact arm rates
    GroundTruths truths;
    CausationBounds bounds;  // bounds at the exact rates
    std::optional<bool> pn_contained;  // absent when the truth is undefined
    std::optional<bool> ps_contained;
    bool pns_contained = false;
    std::optional<CoverageResult> coverage;

    bool operator==(const SimulationRow&) const = default;
};

struct SimulationReport {
    std::size_t population_size = 0;
    double treated_fraction = 0.5;
    bool fixed_arms = false;
    bool paired = false;
    std::optional<std::size_t> replications;  // absent: exact-only run
    double confidence_level = 0.95;
    std::uint64_t seed = 0;
    std::vector<SimulationRow> rows;

    bool operator==(const SimulationReport&) const = default;
};

void write_simulation_report(std::ostream& out, const SimulationReport& report,
                             OutputFormat format);

}  // namespace causalfi
