#include "causalfi/input.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace causalfi {

namespace {

using nlohmann::json;

constexpr double kComplementTolerance = 1e-9;

std::string locate(const std::string& origin, std::size_t line, std::size_t column) {
    std::string out = origin;
    if (line > 0) {
        out += ":" + std::to_string(line);
        if (column > 0) out += ":" + std::to_string(column);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based
};

// Minimal RFC-style CSV: quoted fields may contain commas and doubled quotes.
// Accepts LF and CRLF.
std::vector<CsvRow> parse_csv(const std::string& text, const std::string& origin) {
    std::vector<CsvRow> rows;
    CsvRow current;
    current.line = 1;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;
    std::size_t line = 1;

    auto end_field = [&] {
        current.fields.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        if (row_has_content || !current.fields.empty()) {
            end_field();
            rows.push_back(std::move(current));
        }
        current = CsvRow{};
        current.line = line;
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_row();
                break;
            default:
                field += c;
                row_has_content = true;
        }
    }
    if (in_quotes) {
        throw InputError(origin, line, 0, "unterminated quoted field");
    }
    end_row();
    return rows;
}

std::uint64_t parse_count(const std::string& raw, const std::string& origin,
                          std::size_t line, std::size_t column, const char* what) {
    const std::string s = trim(raw);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InputError(origin, line, column,
                         std::string(what) + " must be a nonnegative integer, got '" + s + "'");
    }
    return value;
}

double parse_probability(const std::string& raw, const std::string& origin,
                         std::size_t line, std::size_t column, const char* what) {
    const std::string s = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InputError(origin, line, column,
                         std::string(what) + " must be a number, got '" + s + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw InputError(origin, line, column,
                         std::string(what) + " must lie in [0, 1], got '" + s + "'");
    }
    return value;
}

enum class Arm { controlled, experimental };

struct CountRow {
    std::string feature;
    std::optional<Arm> arm;  // nullopt: label did not parse
    std::string raw_label;
    ArmCounts counts;
    std::size_t line = 0;
};

struct RateRow {
    std::string feature;
    ConditionalRates rates;
    std::optional<std::uint64_t> arm_size;
    std::size_t line = 0;
};

std::optional<Arm> parse_arm_label(const std::string& raw) {
    const std::string label = to_lower(trim(raw));
    if (label == "controlled") return Arm::controlled;
    if (label == "experimental") return Arm::experimental;
    return std::nullopt;
}

// Groups count rows into per-feature (experimental, controlled) pairs.
// Exactly two rows per feature; a row whose label is unrecognizable takes
// whichever arm remains, falling back to the Table-style row order
// (experimental first) when both labels are malformed.
std::vector<FeatureInput> assemble_counts(const std::vector<CountRow>& rows,
                                          const std::string& origin) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<CountRow>> groups;
    for (const CountRow& row : rows) {
        auto [it, inserted] = groups.try_emplace(row.feature);
        if (inserted) order.push_back(row.feature);
        it->second.push_back(row);
    }

    std::vector<FeatureInput> features;
    for (const std::string& name : order) {
        const auto& group = groups[name];
        if (group.size() != 2) {
            throw InputError(origin, group.front().line, 0,
                             "feature '" + name + "' needs exactly 2 rows (controlled and "
                             "experimental), got " + std::to_string(group.size()));
        }
        const CountRow& first = group[0];
        const CountRow& second = group[1];

        std::optional<Arm> first_arm = first.arm;
        std::optional<Arm> second_arm = second.arm;
        bool assumed = false;
        if (first_arm && second_arm) {
            if (*first_arm == *second_arm) {
                throw InputError(origin, second.line, 0,
                                 "feature '" + name + "' lists the same arm twice");
            }
        } else if (first_arm) {
            second_arm = *first_arm == Arm::controlled ? Arm::experimental : Arm::controlled;
            assumed = true;
        } else if (second_arm) {
            first_arm = *second_arm == Arm::controlled ? Arm::experimental : Arm::controlled;
            assumed = true;
        } else {
            first_arm = Arm::experimental;
            second_arm = Arm::controlled;
            assumed = true;
        }

        RctResult rct;
        rct.controlled = *first_arm == Arm::controlled ? first.counts : second.counts;
        rct.experimental = *first_arm == Arm::experimental ? first.counts : second.counts;

        FeatureInput feature;
        feature.name = name;
        feature.rates = rates_from_counts(rct);
        feature.counts = rct;
        feature.arm_size_controlled = rct.controlled.total;
        feature.arm_size_experimental = rct.experimental.total;
        if (assumed) feature.flags.push_back("arm-label-assumed");
        features.push_back(std::move(feature));
    }
    return features;
}

void check_complement(double rate, double complement, const std::string& origin,
                      std::size_t line, std::size_t column, const char* pair) {
    const double sum = rate + complement;
    if (std::abs(sum - 1.0) > kComplementTolerance) {
        std::ostringstream msg;
        msg << pair << " must sum to 1, got " << sum;
        throw InputError(origin, line, column, msg.str());
    }
}

std::vector<FeatureInput> assemble_rates(const std::vector<RateRow>& rows,
                                         const std::string& origin) {
    std::vector<FeatureInput> features;
    std::vector<std::string> seen;
    for (const RateRow& row : rows) {
        if (std::find(seen.begin(), seen.end(), row.feature) != seen.end()) {
            throw InputError(origin, row.line, 0,
                             "duplicate feature '" + row.feature + "'");
        }
        seen.push_back(row.feature);
        FeatureInput feature;
        feature.name = row.feature;
        feature.rates = row.rates;
        feature.arm_size_controlled = row.arm_size;
        feature.arm_size_experimental = row.arm_size;
        features.push_back(std::move(feature));
    }
    return features;
}

std::map<std::string, std::size_t> header_index(const CsvRow& header) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        index[to_lower(trim(header.fields[i]))] = i;
    }
    return index;
}

const std::string& field_at(const CsvRow& row, std::size_t idx, const std::string& origin,
                            const char* column_name) {
    if (idx >= row.fields.size()) {
        throw InputError(origin, row.line, idx + 1,
                         std::string("missing field '") + column_name + "'");
    }
    return row.fields[idx];
}

std::vector<FeatureInput> parse_csv_features(const std::string& text,
                                             const std::string& origin) {
    const std::vector<CsvRow> rows = parse_csv(text, origin);
    if (rows.empty()) {
        throw InputError(origin, 1, 0, "empty input: expected a header row");
    }
    const auto header = header_index(rows.front());
    const bool counts_schema = header.count("arm") && header.count("recognized") &&
                               header.count("total") && header.count("feature");
    const bool rates_schema = header.count("feature") && header.count("p_y_given_x") &&
                              header.count("p_y_given_xp");
    if (!counts_schema && !rates_schema) {
        throw InputError(origin, rows.front().line, 0,
                         "header matches neither the counts schema (feature, arm, "
                         "recognized, total) nor the rates schema (feature, p_y_given_x, "
                         "p_y_given_xp[, arm_size])");
    }

    if (counts_schema) {
        std::vector<CountRow> count_rows;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const CsvRow& row = rows[i];
            CountRow parsed;
            parsed.line = row.line;
            parsed.feature = trim(field_at(row, header.at("feature"), origin, "feature"));
            if (parsed.feature.empty()) {
                throw InputError(origin, row.line, header.at("feature") + 1,
                                 "feature name must not be empty");
            }
            parsed.raw_label = field_at(row, header.at("arm"), origin, "arm");
            parsed.arm = parse_arm_label(parsed.raw_label);
            parsed.counts.recognized = parse_count(
                field_at(row, header.at("recognized"), origin, "recognized"), origin,
                row.line, header.at("recognized") + 1, "recognized");
            parsed.counts.total =
                parse_count(field_at(row, header.at("total"), origin, "total"), origin,
                            row.line, header.at("total") + 1, "total");
            try {
                validate(parsed.counts);
            } catch (const std::invalid_argument& e) {
                throw InputError(origin, row.line, header.at("recognized") + 1, e.what());
            }
            count_rows.push_back(std::move(parsed));
        }
        return assemble_counts(count_rows, origin);
    }

    std::vector<RateRow> rate_rows;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        RateRow parsed;
        parsed.line = row.line;
        parsed.feature = trim(field_at(row, header.at("feature"), origin, "feature"));
        if (parsed.feature.empty()) {
            throw InputError(origin, row.line, header.at("feature") + 1,
                             "feature name must not be empty");
        }
        parsed.rates.p_y_given_x =
            parse_probability(field_at(row, header.at("p_y_given_x"), origin, "p_y_given_x"),
                              origin, row.line, header.at("p_y_given_x") + 1, "p_y_given_x");
        parsed.rates.p_y_given_xp = parse_probability(
            field_at(row, header.at("p_y_given_xp"), origin, "p_y_given_xp"), origin,
            row.line, header.at("p_y_given_xp") + 1, "p_y_given_xp");
        if (auto it = header.find("arm_size"); it != header.end()) {
            const std::string raw = trim(field_at(row, it->second, origin, "arm_size"));
            if (!raw.empty()) {
                const std::uint64_t size =
                    parse_count(raw, origin, row.line, it->second + 1, "arm_size");
                if (size < 1) {
                    throw InputError(origin, row.line, it->second + 1, "arm_size must be >= 1");
                }
                parsed.arm_size = size;
            }
        }
        if (auto it = header.find("p_yp_given_x"); it != header.end()) {
            const double complement =
                parse_probability(field_at(row, it->second, origin, "p_yp_given_x"), origin,
                                  row.line, it->second + 1, "p_yp_given_x");
            check_complement(parsed.rates.p_y_given_x, complement, origin, row.line,
                             it->second + 1, "p_y_given_x and p_yp_given_x");
        }
        if (auto it = header.find("p_yp_given_xp"); it != header.end()) {
            const double complement =
                parse_probability(field_at(row, it->second, origin, "p_yp_given_xp"), origin,
                                  row.line, it->second + 1, "p_yp_given_xp");
            check_complement(parsed.rates.p_y_given_xp, complement, origin, row.line,
                             it->second + 1, "p_y_given_xp and p_yp_given_xp");
        }
        rate_rows.push_back(std::move(parsed));
    }
    return assemble_rates(rate_rows, origin);
}

std::pair<std::size_t, std::size_t> offset_to_line_column(const std::string& text,
                                                          std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

double json_probability(const json& obj, const char* key, std::size_t row,
                        const std::string& origin) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw InputError(origin, "row " + std::to_string(row) + ": '" + key +
                                     "' must be a number");
    }
    const double value = v.get<double>();
    if (!(value >= 0.0 && value <= 1.0)) {
        throw InputError(origin, "row " + std::to_string(row) + ": '" + key +
                                     "' must lie in [0, 1]");
    }
    return value;
}

std::uint64_t json_count(const json& obj, const char* key, std::size_t row,
                         const std::string& origin) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
        throw InputError(origin, "row " + std::to_string(row) + ": '" + key +
                                     "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<FeatureInput> parse_json_features(const std::string& text,
                                              const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = offset_to_line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw InputError(origin, line, column, "JSON parse error: " + std::string(e.what()));
    }
    if (!doc.is_array()) {
        throw InputError(origin, 1, 1, "expected a JSON array of row objects");
    }
    if (doc.empty()) {
        return {};
    }

    const bool counts_schema = doc.front().is_object() && doc.front().contains("arm");
    std::vector<CountRow> count_rows;
    std::vector<RateRow> rate_rows;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& obj = doc[i];
        const std::size_t row_no = i + 1;
        if (!obj.is_object()) {
            throw InputError(origin, "row " + std::to_string(row_no) + ": expected an object");
        }
        try {
            if (counts_schema) {
                CountRow parsed;
                parsed.line = row_no;
                parsed.feature = obj.at("feature").get<std::string>();
                parsed.raw_label = obj.at("arm").get<std::string>();
                parsed.arm = parse_arm_label(parsed.raw_label);
                parsed.counts.recognized = json_count(obj, "recognized", row_no, origin);
                parsed.counts.total = json_count(obj, "total", row_no, origin);
                validate(parsed.counts);
                count_rows.push_back(std::move(parsed));
            } else {
                RateRow parsed;
                parsed.line = row_no;
                parsed.feature = obj.at("feature").get<std::string>();
                parsed.rates.p_y_given_x = json_probability(obj, "p_y_given_x", row_no, origin);
                parsed.rates.p_y_given_xp =
                    json_probability(obj, "p_y_given_xp", row_no, origin);
                if (obj.contains("arm_size")) {
                    parsed.arm_size = json_count(obj, "arm_size", row_no, origin);
                } else if (obj.contains("arm_size_controlled") &&
                           obj.contains("arm_size_experimental")) {
                    // A republished report names the arms separately; rates need a
                    // single size per arm, so keep them only when they agree.
                    const auto controlled =
                        json_count(obj, "arm_size_controlled", row_no, origin);
                    const auto experimental =
                        json_count(obj, "arm_size_experimental", row_no, origin);
                    if (controlled == experimental) parsed.arm_size = controlled;
                }
                if (obj.contains("p_yp_given_x")) {
                    check_complement(parsed.rates.p_y_given_x,
                                     json_probability(obj, "p_yp_given_x", row_no, origin),
                                     origin, 0, 0, "p_y_given_x and p_yp_given_x");
                }
                if (obj.contains("p_yp_given_xp")) {
                    check_complement(parsed.rates.p_y_given_xp,
                                     json_probability(obj, "p_yp_given_xp", row_no, origin),
                                     origin, 0, 0, "p_y_given_xp and p_yp_given_xp");
                }
                rate_rows.push_back(std::move(parsed));
            }
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(origin, "row " + std::to_string(row_no) + ": " + e.what());
        }
    }
    return counts_schema ? assemble_counts(count_rows, origin)
                         : assemble_rates(rate_rows, origin);
}

}  // namespace

InputError::InputError(const std::string& origin, std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(locate(origin, line, column) + ": " + message),
      line_(line),
      column_(column) {}

InputError::InputError(const std::string& origin, const std::string& message)
    : std::runtime_error(origin + ": " + message) {}

std::vector<FeatureInput> parse_features_text(const std::string& text,
                                              const std::string& origin) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '[' || c == '{') {
            return parse_json_features(text, origin);
        }
        break;
    }
    return parse_csv_features(text, origin);
}

std::vector<FeatureInput> parse_features_file(const std::string& path) {
    return parse_features_text(read_text_file(path), path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path, "cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace causalfi
