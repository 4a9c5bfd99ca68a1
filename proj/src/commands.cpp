#include "causalfi/commands.hpp"

#include <algorithm>

#include <json.hpp>

#include "causalfi/rng.hpp"

namespace causalfi {

namespace {

using nlohmann::json;

std::vector<FeatureInput> load_features(const std::string& path) {
    std::vector<FeatureInput> features = parse_features_file(path);
    if (features.empty()) {
        throw InputError(path, "no features");
    }
    return features;
}

const json& require_key(const json& obj, const char* key, const std::string& origin) {
    if (!obj.contains(key)) {
        throw InputError(origin, std::string("missing '") + key + "'");
    }
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& origin) {
    const json& v = require_key(obj, key, origin);
    if (!v.is_number()) {
        throw InputError(origin, std::string("'") + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t require_uint(const json& obj, const char* key, const std::string& origin) {
    const json& v = require_key(obj, key, origin);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw InputError(origin, std::string("'") + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::uint64_t uint_or(const json& obj, const char* key, std::uint64_t fallback,
                      const std::string& origin) {
    return obj.contains(key) ? require_uint(obj, key, origin) : fallback;
}

double number_or(const json& obj, const char* key, double fallback,
                 const std::string& origin) {
    return obj.contains(key) ? require_number(obj, key, origin) : fallback;
}

bool bool_or(const json& obj, const char* key, bool fallback, const std::string& origin) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        throw InputError(origin, std::string("'") + key + "' must be a boolean");
    }
    return v.get<bool>();
}

SimulationReport run_simulation(const std::string& path) {
    json cfg;
    try {
        cfg = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw InputError(path, std::string("JSON parse error: ") + e.what());
    }
    if (!cfg.is_object()) {
        throw InputError(path, "expected a JSON object");
    }

    SimulationReport report;
    report.population_size = require_uint(cfg, "population_size", path);
    if (report.population_size < 2) {
        throw InputError(path, "'population_size' must be >= 2");
    }
    report.treated_fraction = number_or(cfg, "treated_fraction", 0.5, path);
    if (!(report.treated_fraction > 0.0 && report.treated_fraction < 1.0)) {
        throw InputError(path, "'treated_fraction' must lie strictly between 0 and 1");
    }
    report.fixed_arms = bool_or(cfg, "fixed_arms", false, path);
    report.paired = bool_or(cfg, "paired", false, path);
    if (cfg.contains("replications")) {
        const std::uint64_t replications = require_uint(cfg, "replications", path);
        if (replications < 1) {
            throw InputError(path, "'replications' must be >= 1");
        }
        report.replications = replications;
    }
    report.confidence_level = number_or(cfg, "confidence_level", 0.95, path);
    if (!(report.confidence_level > 0.0 && report.confidence_level < 1.0)) {
        throw InputError(path, "'confidence_level' must lie strictly between 0 and 1");
    }
    report.seed = uint_or(cfg, "seed", 0, path);
    const unsigned threads = static_cast<unsigned>(uint_or(cfg, "threads", 0, path));

    const json& dists = require_key(cfg, "distributions", path);
    if (!dists.is_array() || dists.empty()) {
        throw InputError(path, "'distributions' must be a non-empty array");
    }

    for (std::size_t i = 0; i < dists.size(); ++i) {
        const json& d = dists[i];
        if (!d.is_object()) {
            throw InputError(path, "distribution " + std::to_string(i + 1) +
                                       ": expected an object");
        }
        SimulationRow row;
        row.name = d.contains("name") ? require_key(d, "name", path).get<std::string>()
                                      : "dist" + std::to_string(i + 1);
        row.dist.always = require_number(d, "always", path);
        row.dist.causative = require_number(d, "causative", path);
        row.dist.preventive = require_number(d, "preventive", path);
        row.dist.never = require_number(d, "never", path);
        try {
            validate(row.dist);
        } catch (const std::invalid_argument& e) {
            throw InputError(path, "distribution '" + row.name + "': " + e.what());
        }

        row.rates = exact_rates(row.dist);
        row.truths = ground_truths(row.dist);
        row.bounds = causation_bounds(row.rates);
        // Containment with rounding slack: the truth and the endpoint are
        // computed by different arithmetic (causative vs (a+c) - (a+p)), so a
        // monotone mix can land an ulp outside an endpoint it equals exactly.
        const auto contained = [](const ProbabilityInterval& iv, double truth) {
            return iv.lower - 1e-12 <= truth && truth <= iv.upper + 1e-12;
        };
        row.pns_contained = contained(row.bounds.pns, row.truths.pns);
        if (row.truths.pn && row.bounds.pn.defined()) {
            row.pn_contained = contained(*row.bounds.pn.interval, *row.truths.pn);
        }
        if (row.truths.ps && row.bounds.ps.defined()) {
            row.ps_contained = contained(*row.bounds.ps.interval, *row.truths.ps);
        }

        if (report.replications) {
            CoverageConfig cc;
            cc.population_size = report.population_size;
            cc.treated_fraction = report.treated_fraction;
            cc.fixed_arms = report.fixed_arms;
            cc.paired = report.paired;
            cc.replications = *report.replications;
            cc.confidence_level = report.confidence_level;
            cc.seed = derive_seed(report.seed, i);
            cc.threads = threads;
            row.coverage = coverage_study(row.dist, cc);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace

int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const std::vector<FeatureInput> features = load_features(opts.input_path);
        std::vector<ReportRow> rows;
        rows.reserve(features.size());
        for (const FeatureInput& f : features) {
            rows.push_back(make_report_row(f, opts.confidence));
        }
        const bool any_defined =
            std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) {
                return r.bounds.pn.defined() || r.bounds.ps.defined();
            });
        if (!any_defined) {
            err << "error: " << opts.input_path
                << ": no computable bounds: every feature's PN-FI and PS-FI are "
                   "undefined\n";
            return exit_no_output;
        }
        write_bounds_report(out, rows, opts.format);
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

int cmd_rank(const RankOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const std::vector<FeatureInput> features = load_features(opts.input_path);
        std::vector<FeatureRecord> records;
        records.reserve(features.size());
        for (const FeatureInput& f : features) {
            records.push_back(make_feature_record(f.name, f.rates, f.flags));
        }
        const RankReport report = make_rank_report(records, opts.criterion, opts.threshold);
        const bool any_score =
            std::any_of(report.rows.begin(), report.rows.end(),
                        [](const RankReportRow& r) { return r.score.has_value(); });
        if (!any_score) {
            err << "error: " << opts.input_path << ": no computable scores: every feature's "
                << to_string(opts.criterion.target) << " component is undefined\n";
            return exit_no_output;
        }
        write_rank_report(out, report, opts.format);
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const SimulationReport report = run_simulation(opts.config_path);
        write_simulation_report(out, report, opts.format);
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
}

}  // namespace causalfi
