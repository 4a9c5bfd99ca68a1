#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "causalfi/report.hpp"

namespace causalfi {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_no_output = 3;

struct BoundsOptions {
    std::string input_path;
    OutputFormat format = OutputFormat::table;
    std::optional<double> confidence;
};

struct RankOptions {
    std::string input_path;
    OutputFormat format = OutputFormat::table;
    RankingCriterion criterion;
    std::optional<double> threshold;
};

struct SimulateOptions {
    std::string config_path;
    OutputFormat format = OutputFormat::table;
};

// Each command writes its report to `out` and diagnostics to `err`, and
// returns the process exit code: exit_ok on success, exit_input_error on
// malformed or unusable input, exit_no_output when nothing is computable
// (every feature's PN-FI and PS-FI are both undefined, or every ranking
// score is absent).
int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rank(const RankOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace causalfi
