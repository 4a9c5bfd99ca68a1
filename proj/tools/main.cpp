#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "causalfi/commands.hpp"

namespace {

// "--by pns:mid" style criterion: <pn|ps|pns>:<lower|mid|upper>.
std::optional<causalfi::RankingCriterion> parse_criterion(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string target = spec.substr(0, colon);
    const std::string statistic = spec.substr(colon + 1);

    causalfi::RankingCriterion criterion;
    if (target == "pn") {
        criterion.target = causalfi::BoundTarget::pn;
    } else if (target == "ps") {
        criterion.target = causalfi::BoundTarget::ps;
    } else if (target == "pns") {
        criterion.target = causalfi::BoundTarget::pns;
    } else {
        return std::nullopt;
    }
    if (statistic == "lower") {
        criterion.statistic = causalfi::IntervalStatistic::lower;
    } else if (statistic == "mid" || statistic == "midpoint") {
        criterion.statistic = causalfi::IntervalStatistic::midpoint;
    } else if (statistic == "upper") {
        criterion.statistic = causalfi::IntervalStatistic::upper;
    } else {
        return std::nullopt;
    }
    return criterion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-valued feature importance from randomized experiments"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"table", "csv", "json"});

    std::string bounds_input;
    std::string bounds_format = "table";
    double confidence = 0.0;
    auto* bounds = app.add_subcommand(
        "bounds", "Per-feature PN-FI / PS-FI / PNS-FI bounds from an experiment table");
    bounds->add_option("input", bounds_input, "counts- or rates-schema file (CSV or JSON)")
        ->required();
    bounds->add_option("--format", bounds_format, "output format")
        ->check(format_check)
        ->default_str("table");
    auto* confidence_opt = bounds->add_option(
        "--confidence", confidence,
        "also report Wilson-envelope bounds at this confidence level");

    std::string simulate_config;
    std::string simulate_format = "table";
    auto* simulate = app.add_subcommand(
        "simulate", "Ground-truth containment and coverage study from a config file");
    simulate->add_option("config", simulate_config, "simulation config (JSON)")->required();
    simulate->add_option("--format", simulate_format, "output format")
        ->check(format_check)
        ->default_str("table");

    std::string rank_input;
    std::string rank_format = "table";
    std::string by_spec;
    double threshold = 0.0;
    auto* rank = app.add_subcommand("rank", "Rank features by a causation-bound statistic");
    rank->add_option("input", rank_input, "counts- or rates-schema file (CSV or JSON)")
        ->required();
    rank->add_option("--by", by_spec, "criterion: <pn|ps|pns>:<lower|mid|upper>")
        ->required();
    auto* threshold_opt =
        rank->add_option("--threshold", threshold, "also report the selected set at >= t");
    rank->add_option("--format", rank_format, "output format")
        ->check(format_check)
        ->default_str("table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return causalfi::exit_input_error;
    }

    if (*bounds) {
        causalfi::BoundsOptions opts;
        opts.input_path = bounds_input;
        opts.format = *causalfi::parse_output_format(bounds_format);
        if (confidence_opt->count() > 0) {
            if (!(confidence > 0.0 && confidence < 1.0)) {
                std::cerr << "error: --confidence must lie strictly between 0 and 1\n";
                return causalfi::exit_input_error;
            }
            opts.confidence = confidence;
        }
        return causalfi::cmd_bounds(opts, std::cout, std::cerr);
    }
    if (*simulate) {
        causalfi::SimulateOptions opts;
        opts.config_path = simulate_config;
        opts.format = *causalfi::parse_output_format(simulate_format);
        return causalfi::cmd_simulate(opts, std::cout, std::cerr);
    }

    causalfi::RankOptions opts;
    opts.input_path = rank_input;
    opts.format = *causalfi::parse_output_format(rank_format);
    const auto criterion = parse_criterion(by_spec);
    if (!criterion) {
        std::cerr << "error: --by must be <pn|ps|pns>:<lower|mid|upper>, got '" << by_spec
                  << "'\n";
        return causalfi::exit_input_error;
    }
    opts.criterion = *criterion;
    if (threshold_opt->count() > 0) {
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            std::cerr << "error: --threshold must lie in [0, 1]\n";
            return causalfi::exit_input_error;
        }
        opts.threshold = threshold;
    }
    return causalfi::cmd_rank(opts, std::cout, std::cerr);
}
