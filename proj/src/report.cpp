#include "causalfi/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include <json.hpp>

namespace causalfi {

namespace {

using nlohmann::ordered_json;

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(cells[i]);
    }
    out << '\n';
}

// Left-aligned columns, two-space gutter, no trailing whitespace.
void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            line += row[i];
            if (i + 1 < row.size()) line.append(widths[i] - row[i].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
}

std::string interval_cell(const ProbabilityInterval& iv) {
    return "[" + format_fixed3(iv.lower) + ", " + format_fixed3(iv.upper) + "]";
}

std::string component_cell(const BoundComponent& c) {
    return c.defined() ? interval_cell(*c.interval) : "n/a (" + describe(*c.absence) + ")";
}

std::string percent_label(double level) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", level * 100.0);
    return std::string(buf) + "%";
}

// CSV cells (lower, upper, reason) for one PN/PS component.
void append_component_cells(std::vector<std::string>& cells, const BoundComponent& c) {
    if (c.defined()) {
        cells.push_back(format_double(c.interval->lower));
        cells.push_back(format_double(c.interval->upper));
        cells.push_back("");
    } else {
        cells.push_back("");
        cells.push_back("");
        cells.push_back(to_string(*c.absence));
    }
}

ordered_json interval_json(const ProbabilityInterval& iv) {
    return ordered_json{{"lower", iv.lower}, {"upper", iv.upper}};
}

void set_component_json(ordered_json& obj, const char* key, const BoundComponent& c) {
    if (c.defined()) {
        obj[key] = interval_json(*c.interval);
    } else {
        obj[key] = nullptr;
        obj[std::string(key) + "_reason"] = to_string(*c.absence);
    }
}

std::optional<BoundAbsence> absence_from_slug(const std::string& slug) {
    if (slug == "zero_p_y_given_x") return BoundAbsence::zero_p_y_given_x;
    if (slug == "zero_p_yp_given_xp") return BoundAbsence::zero_p_yp_given_xp;
    return std::nullopt;
}

void write_bounds_table(std::ostream& out, const std::vector<ReportRow>& rows) {
    const bool any_flags =
        std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.flags.empty(); });

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"feature", "P(y|x)", "P(y|x')",
                                       "PN-FI",   "PS-FI",  "PNS-FI"};
    if (any_flags) header.push_back("flags");
    table.push_back(std::move(header));

    for (const ReportRow& row : rows) {
        std::vector<std::string> cells = {row.feature,
                                          format_fixed3(row.rates.p_y_given_x),
                                          format_fixed3(row.rates.p_y_given_xp),
                                          component_cell(row.bounds.pn),
                                          component_cell(row.bounds.ps),
                                          interval_cell(row.bounds.pns)};
        if (any_flags) cells.push_back(join(row.flags, " "));
        table.push_back(std::move(cells));

        if (row.envelope) {
            const UncertaintyEnvelope& env = *row.envelope;
            table.push_back({"  " + percent_label(env.level) + " envelope", "", "",
                             component_cell(env.bounds.pn), component_cell(env.bounds.ps),
                             interval_cell(env.bounds.pns)});
        }
    }
    write_aligned(out, table);
}

void write_bounds_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    const bool with_env =
        std::any_of(rows.begin(), rows.end(),
                    [](const ReportRow& r) { return r.envelope.has_value(); });

    std::vector<std::string> header = {
        "feature",  "p_y_given_x", "p_y_given_xp", "arm_size_controlled",
        "arm_size_experimental", "pn_lower", "pn_upper", "pn_reason",
        "ps_lower", "ps_upper",   "ps_reason",    "pns_lower", "pns_upper"};
    if (with_env) {
        const char* extra[] = {"confidence_level", "env_pn_lower", "env_pn_upper",
                               "env_pn_reason",    "env_ps_lower", "env_ps_upper",
                               "env_ps_reason",    "env_pns_lower", "env_pns_upper"};
        header.insert(header.end(), std::begin(extra), std::end(extra));
    }
    header.push_back("flags");
    write_csv_line(out, header);

    for (const ReportRow& row : rows) {
        std::vector<std::string> cells = {
            row.feature, format_double(row.rates.p_y_given_x),
            format_double(row.rates.p_y_given_xp),
            row.arm_size_controlled ? std::to_string(*row.arm_size_controlled) : "",
            row.arm_size_experimental ? std::to_string(*row.arm_size_experimental) : ""};
        append_component_cells(cells, row.bounds.pn);
        append_component_cells(cells, row.bounds.ps);
        cells.push_back(format_double(row.bounds.pns.lower));
        cells.push_back(format_double(row.bounds.pns.upper));
        if (with_env) {
            if (row.envelope) {
                cells.push_back(format_double(row.envelope->level));
                append_component_cells(cells, row.envelope->bounds.pn);
                append_component_cells(cells, row.envelope->bounds.ps);
                cells.push_back(format_double(row.envelope->bounds.pns.lower));
                cells.push_back(format_double(row.envelope->bounds.pns.upper));
            } else {
                cells.insert(cells.end(), 9, "");
            }
        }
        cells.push_back(join(row.flags, ";"));
        write_csv_line(out, cells);
    }
}

ordered_json row_to_json(const ReportRow& row) {
    ordered_json j;
    j["feature"] = row.feature;
    j["p_y_given_x"] = row.rates.p_y_given_x;
    j["p_y_given_xp"] = row.rates.p_y_given_xp;
    if (row.arm_size_controlled) j["arm_size_controlled"] = *row.arm_size_controlled;
    if (row.arm_size_experimental) j["arm_size_experimental"] = *row.arm_size_experimental;
    set_component_json(j, "pn", row.bounds.pn);
    set_component_json(j, "ps", row.bounds.ps);
    j["pns"] = interval_json(row.bounds.pns);
    if (row.envelope) {
        ordered_json env;
        env["level"] = row.envelope->level;
        set_component_json(env, "pn", row.envelope->bounds.pn);
        set_component_json(env, "ps", row.envelope->bounds.ps);
        env["pns"] = interval_json(row.envelope->bounds.pns);
        j["envelope"] = std::move(env);
    }
    j["flags"] = row.flags;
    return j;
}

ProbabilityInterval interval_from_json(const ordered_json& v, const std::string& where,
                                       const std::string& origin) {
    if (!v.is_object() || !v.contains("lower") || !v.contains("upper")) {
        throw InputError(origin, where + ": expected {\"lower\", \"upper\"}");
    }
    return {v.at("lower").get<double>(), v.at("upper").get<double>()};
}

BoundComponent component_from_json(const ordered_json& obj, const char* key,
                                   const std::string& where, const std::string& origin) {
    const ordered_json& v = obj.at(key);
    if (v.is_null()) {
        const std::string slug = obj.at(std::string(key) + "_reason").get<std::string>();
        const auto reason = absence_from_slug(slug);
        if (!reason) {
            throw InputError(origin, where + ": unknown absence reason '" + slug + "'");
        }
        return BoundComponent::absent(*reason);
    }
    return BoundComponent::of(interval_from_json(v, where, origin));
}

}  // namespace

std::optional<OutputFormat> parse_output_format(const std::string& name) {
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    return std::nullopt;
}

ReportRow make_report_row(const FeatureInput& input, std::optional<double> confidence) {
    const FeatureRecord record = make_feature_record(input.name, input.rates, input.flags);

    ReportRow row;
    row.feature = record.name;
    row.rates = record.rates;
    row.arm_size_controlled = input.arm_size_controlled;
    row.arm_size_experimental = input.arm_size_experimental;
    row.bounds = record.bounds;
    row.flags = record.flags;

    if (confidence) {
        if (!input.arm_size_controlled || !input.arm_size_experimental) {
            throw std::invalid_argument("feature '" + input.name +
                                        "': confidence envelopes need arm sizes (counts "
                                        "schema, or rates schema with arm_size)");
        }
        UncertaintyEnvelope env;
        env.level = *confidence;
        env.bounds = bounds_envelope(
            wilson_interval(input.rates.p_y_given_x, *input.arm_size_controlled, *confidence),
            wilson_interval(input.rates.p_y_given_xp, *input.arm_size_experimental,
                            *confidence));
        row.envelope = env;
    }
    return row;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void write_bounds_report(std::ostream& out, const std::vector<ReportRow>& rows,
                         OutputFormat format) {
    switch (format) {
        case OutputFormat::table:
            write_bounds_table(out, rows);
            return;
        case OutputFormat::csv:
            write_bounds_csv(out, rows);
            return;
        case OutputFormat::json: {
            ordered_json arr = ordered_json::array();
            for (const ReportRow& row : rows) arr.push_back(row_to_json(row));
            out << arr.dump(2) << '\n';
            return;
        }
    }
}

std::vector<ReportRow> report_rows_from_json(const std::string& text,
                                             const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw InputError(origin, std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_array()) {
        throw InputError(origin, "expected a JSON array of report rows");
    }

    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "row " + std::to_string(i + 1);
        const ordered_json& obj = doc[i];
        if (!obj.is_object()) throw InputError(origin, where + ": expected an object");
        try {
            ReportRow row;
            row.feature = obj.at("feature").get<std::string>();
            row.rates.p_y_given_x = obj.at("p_y_given_x").get<double>();
            row.rates.p_y_given_xp = obj.at("p_y_given_xp").get<double>();
            if (obj.contains("arm_size_controlled")) {
                row.arm_size_controlled = obj.at("arm_size_controlled").get<std::uint64_t>();
            }
            if (obj.contains("arm_size_experimental")) {
                row.arm_size_experimental =
                    obj.at("arm_size_experimental").get<std::uint64_t>();
            }
            row.bounds.pn = component_from_json(obj, "pn", where, origin);
            row.bounds.ps = component_from_json(obj, "ps", where, origin);
            row.bounds.pns = interval_from_json(obj.at("pns"), where, origin);
            if (obj.contains("envelope")) {
                const ordered_json& env = obj.at("envelope");
                UncertaintyEnvelope envelope;
                envelope.level = env.at("level").get<double>();
                envelope.bounds.pn = component_from_json(env, "pn", where, origin);
                envelope.bounds.ps = component_from_json(env, "ps", where, origin);
                envelope.bounds.pns = interval_from_json(env.at("pns"), where, origin);
                row.envelope = envelope;
            }
            row.flags = obj.at("flags").get<std::vector<std::string>>();
            rows.push_back(std::move(row));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(origin, where + ": " + e.what());
        }
    }
    return rows;
}

RankReport make_rank_report(const std::vector<FeatureRecord>& records,
                            const RankingCriterion& criterion,
                            std::optional<double> threshold) {
    RankReport report;
    report.criterion = criterion;
    report.threshold = threshold;

    const std::vector<RankedFeature> ranked = rank_features(records, criterion);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto record =
            std::find_if(records.begin(), records.end(),
                         [&](const FeatureRecord& r) { return r.name == ranked[i].name; });
        RankReportRow row;
        row.rank = i + 1;
        row.name = ranked[i].name;
        row.score = ranked[i].score;
        row.interval = target_interval(record->bounds, criterion.target);
        row.flags = record->flags;
        report.rows.push_back(std::move(row));
    }
    if (threshold) {
        report.selected = select_features(records, criterion, *threshold);
    }
    return report;
}

void write_rank_report(std::ostream& out, const RankReport& report, OutputFormat format) {
    const std::string criterion_label =
        to_string(report.criterion.target) + ":" + to_string(report.criterion.statistic);
    std::string target_label = to_string(report.criterion.target);
    std::transform(target_label.begin(), target_label.end(), target_label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    target_label += "-FI";

    switch (format) {
        case OutputFormat::table: {
            const bool any_flags =
                std::any_of(report.rows.begin(), report.rows.end(),
                            [](const RankReportRow& r) { return !r.flags.empty(); });
            std::vector<std::vector<std::string>> table;
            std::vector<std::string> header = {"rank", "feature", criterion_label,
                                               target_label};
            if (any_flags) header.push_back("flags");
            table.push_back(std::move(header));
            for (const RankReportRow& row : report.rows) {
                std::vector<std::string> cells = {
                    std::to_string(row.rank), row.name,
                    row.score ? format_fixed3(*row.score) : "n/a",
                    row.interval ? interval_cell(*row.interval) : "n/a"};
                if (any_flags) cells.push_back(join(row.flags, " "));
                table.push_back(std::move(cells));
            }
            write_aligned(out, table);
            if (report.threshold) {
                out << "\nselected (" << criterion_label
                    << " >= " << format_fixed3(*report.threshold)
                    << "): " << (report.selected.empty() ? "(none)" : join(report.selected, ", "))
                    << '\n';
            }
            return;
        }
        case OutputFormat::csv: {
            std::vector<std::string> header = {"rank",  "feature", "criterion",
                                               "score", "lower",   "upper"};
            if (report.threshold) header.push_back("selected");
            header.push_back("flags");
            write_csv_line(out, header);
            for (const RankReportRow& row : report.rows) {
                std::vector<std::string> cells = {
                    std::to_string(row.rank), row.name, criterion_label,
                    row.score ? format_double(*row.score) : "",
                    row.interval ? format_double(row.interval->lower) : "",
                    row.interval ? format_double(row.interval->upper) : ""};
                if (report.threshold) {
                    const bool selected =
                        std::find(report.selected.begin(), report.selected.end(), row.name) !=
                        report.selected.end();
                    cells.push_back(selected ? "true" : "false");
                }
                cells.push_back(join(row.flags, ";"));
                write_csv_line(out, cells);
            }
            return;
        }
        case OutputFormat::json: {
            ordered_json j;
            j["criterion"] = criterion_label;
            if (report.threshold) j["threshold"] = *report.threshold;
            ordered_json rows = ordered_json::array();
            for (const RankReportRow& row : report.rows) {
                ordered_json r;
                r["rank"] = row.rank;
                r["feature"] = row.name;
                r["score"] = row.score ? ordered_json(*row.score) : ordered_json(nullptr);
                r["interval"] =
                    row.interval ? interval_json(*row.interval) : ordered_json(nullptr);
                r["flags"] = row.flags;
                rows.push_back(std::move(r));
            }
            j["rows"] = std::move(rows);
            if (report.threshold) j["selected"] = report.selected;
            out << j.dump(2) << '\n';
            return;
        }
    }
}

void write_simulation_report(std::ostream& out, const SimulationReport& report,
                             OutputFormat format) {
    const char* assignment = report.paired       ? "paired assignment"
                             : report.fixed_arms ? "fixed-arms assignment"
                                                 : "bernoulli assignment";
    switch (format) {
        case OutputFormat::table: {
            out << "population " << report.population_size << ", treated fraction "
                << format_fixed3(report.treated_fraction) << ", " << assignment << ", seed "
                << report.seed << '\n';
            if (report.replications) {
                out << "coverage study: " << *report.replications << " replications at "
                    << percent_label(report.confidence_level) << " confidence\n";
            }
            for (const SimulationRow& row : report.rows) {
                out << "\ndistribution '" << row.name << "': always "
                    << format_fixed3(row.dist.always) << ", causative "
                    << format_fixed3(row.dist.causative) << ", preventive "
                    << format_fixed3(row.dist.preventive) << ", never "
                    << format_fixed3(row.dist.never) << '\n';
                out << "  exact rates: P(y|x) " << format_fixed3(row.rates.p_y_given_x)
                    << ", P(y|x') " << format_fixed3(row.rates.p_y_given_xp) << '\n';

                std::vector<std::vector<std::string>> table;
                auto verdict = [](bool contained) {
                    return std::string(contained ? "contained" : "OUTSIDE");
                };
                auto line = [&](const char* label, const std::optional<double>& truth,
                                const BoundComponent& component,
                                const std::optional<bool>& contained) {
                    std::vector<std::string> cells = {std::string("  ") + label};
                    if (truth) {
                        cells.push_back("truth " + format_fixed3(*truth));
                        cells.push_back("bounds " + component_cell(component));
                        cells.push_back(verdict(contained.value()));
                    } else {
                        cells.push_back("truth n/a");
                        cells.push_back("bounds " + component_cell(component));
                        cells.push_back("");
                    }
                    table.push_back(std::move(cells));
                };
                line("PN-FI", row.truths.pn, row.bounds.pn, row.pn_contained);
                line("PS-FI", row.truths.ps, row.bounds.ps, row.ps_contained);
                table.push_back({"  PNS-FI", "truth " + format_fixed3(row.truths.pns),
                                 "bounds " + interval_cell(row.bounds.pns),
                                 verdict(row.pns_contained)});
                write_aligned(out, table);

                if (row.coverage) {
                    const CoverageResult& c = *row.coverage;
                    out << "  coverage: pn " << c.pn_contained << "/" << c.replications
                        << ", ps " << c.ps_contained << "/" << c.replications << ", pns "
                        << c.pns_contained << "/" << c.replications << ", all "
                        << c.all_contained << "/" << c.replications << " ("
                        << format_fixed3(c.all_rate()) << ")\n";
                }
            }
            return;
        }
        case OutputFormat::csv: {
            std::vector<std::string> header = {
                "name",         "always",     "causative", "preventive", "never",
                "p_y_given_x",  "p_y_given_xp", "pn_truth",  "pn_lower",   "pn_upper",
                "pn_contained", "ps_truth",   "ps_lower",  "ps_upper",   "ps_contained",
                "pns_truth",    "pns_lower",  "pns_upper", "pns_contained"};
            if (report.replications) {
                const char* extra[] = {"replications", "pn_covered", "ps_covered",
                                       "pns_covered", "all_covered"};
                header.insert(header.end(), std::begin(extra), std::end(extra));
            }
            write_csv_line(out, header);
            for (const SimulationRow& row : report.rows) {
                auto opt_bool = [](const std::optional<bool>& b) {
                    return b ? std::string(*b ? "true" : "false") : std::string();
                };
                std::vector<std::string> cells = {row.name,
                                                  format_double(row.dist.always),
                                                  format_double(row.dist.causative),
                                                  format_double(row.dist.preventive),
                                                  format_double(row.dist.never),
                                                  format_double(row.rates.p_y_given_x),
                                                  format_double(row.rates.p_y_given_xp)};
                auto push_interval = [&](const BoundComponent& c) {
                    cells.push_back(c.defined() ? format_double(c.interval->lower) : "");
                    cells.push_back(c.defined() ? format_double(c.interval->upper) : "");
                };
                cells.push_back(row.truths.pn ? format_double(*row.truths.pn) : "");
                push_interval(row.bounds.pn);
                cells.push_back(opt_bool(row.pn_contained));
                cells.push_back(row.truths.ps ? format_double(*row.truths.ps) : "");
                push_interval(row.bounds.ps);
                cells.push_back(opt_bool(row.ps_contained));
                cells.push_back(format_double(row.truths.pns));
                cells.push_back(format_double(row.bounds.pns.lower));
                cells.push_back(format_double(row.bounds.pns.upper));
                cells.push_back(row.pns_contained ? "true" : "false");
                if (report.replications) {
                    if (row.coverage) {
                        cells.push_back(std::to_string(row.coverage->replications));
                        cells.push_back(std::to_string(row.coverage->pn_contained));
                        cells.push_back(std::to_string(row.coverage->ps_contained));
                        cells.push_back(std::to_string(row.coverage->pns_contained));
                        cells.push_back(std::to_string(row.coverage->all_contained));
                    } else {
                        cells.insert(cells.end(), 5, "");
                    }
                }
                write_csv_line(out, cells);
            }
            return;
        }
        case OutputFormat::json: {
            ordered_json j;
            ordered_json config;
            config["population_size"] = report.population_size;
            config["treated_fraction"] = report.treated_fraction;
            config["fixed_arms"] = report.fixed_arms;
            config["paired"] = report.paired;
            if (report.replications) config["replications"] = *report.replications;
            config["confidence_level"] = report.confidence_level;
            config["seed"] = report.seed;
            j["config"] = std::move(config);

            ordered_json dists = ordered_json::array();
            for (const SimulationRow& row : report.rows) {
                ordered_json r;
                r["name"] = row.name;
                r["distribution"] = ordered_json{{"always", row.dist.always},
                                                 {"causative", row.dist.causative},
                                                 {"preventive", row.dist.preventive},
                                                 {"never", row.dist.never}};
                r["rates"] = ordered_json{{"p_y_given_x", row.rates.p_y_given_x},
                                          {"p_y_given_xp", row.rates.p_y_given_xp}};
                ordered_json truths;
                truths["pn"] = row.truths.pn ? ordered_json(*row.truths.pn)
                                             : ordered_json(nullptr);
                truths["ps"] = row.truths.ps ? ordered_json(*row.truths.ps)
                                             : ordered_json(nullptr);
                truths["pns"] = row.truths.pns;
                r["truths"] = std::move(truths);
                ordered_json bounds;
                set_component_json(bounds, "pn", row.bounds.pn);
                set_component_json(bounds, "ps", row.bounds.ps);
                bounds["pns"] = interval_json(row.bounds.pns);
                r["bounds"] = std::move(bounds);
                ordered_json contained;
                contained["pn"] = row.pn_contained ? ordered_json(*row.pn_contained)
                                                   : ordered_json(nullptr);
                contained["ps"] = row.ps_contained ? ordered_json(*row.ps_contained)
                                                   : ordered_json(nullptr);
                contained["pns"] = row.pns_contained;
                r["contained"] = std::move(contained);
                if (row.coverage) {
                    r["coverage"] = ordered_json{{"replications", row.coverage->replications},
                                                 {"pn", row.coverage->pn_contained},
                                                 {"ps", row.coverage->ps_contained},
                                                 {"pns", row.coverage->pns_contained},
                                                 {"all", row.coverage->all_contained},
                                                 {"all_rate", row.coverage->all_rate()}};
                }
                dists.push_back(std::move(r));
            }
            j["distributions"] = std::move(dists);
            out << j.dump(2) << '\n';
            return;
        }
    }
}

}  // namespace causalfi
