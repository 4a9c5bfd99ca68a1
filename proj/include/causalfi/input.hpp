#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalfi/estimation.hpp"

namespace causalfi {

// Parse or validation failure, with 1-based line/column where known.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& origin, std::size_t line, std::size_t column,
               const std::string& message);
    InputError(const std::string& origin, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

// One feature as ingested: rates plus, when the source carried them, the raw
// arm counts (counts schema) or a stated arm size (rates schema).
struct FeatureInput {
    std::string name;
    ConditionalRates rates;
    std::optional<RctResult> counts;
    std::optional<std::uint64_t> arm_size_controlled;
    std::optional<std::uint64_t> arm_size_experimental;
    std::vector<std::string> flags;  // ingestion annotations, e.g. arm-label-assumed
};

// Parses experiment tables in either accepted schema:
//
//   counts: feature, arm (controlled|experimental), recognized, total
//           -- two rows per feature
//   rates:  feature, p_y_given_x, p_y_given_xp
//           [, arm_size][, p_yp_given_x][, p_yp_given_xp]
//
// as CSV with a header row, or as a JSON array of row objects with the same
// keys (detected from the first non-space byte). Redundant complement rates,
// when present, must satisfy rate + complement = 1 within 1e-9 or the record
// is rejected. A malformed arm label falls back to the (experimental,
// controlled) row-order convention and flags the feature "arm-label-assumed".
std::vector<FeatureInput> parse_features_text(const std::string& text,
                                              const std::string& origin);

std::vector<FeatureInput> parse_features_file(const std::string& path);

// Reads a whole file; throws InputError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace causalfi
