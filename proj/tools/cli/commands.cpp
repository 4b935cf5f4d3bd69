#include "cli/commands.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "vaxcast/error.hpp"
#include "vaxcast/ingest/clinical.hpp"
#include "vaxcast/ingest/csv.hpp"
#include "vaxcast/ingest/keywords.hpp"
#include "vaxcast/ingest/trends.hpp"
#include "vaxcast/io/tables.hpp"
#include "vaxcast/series/diagnostics.hpp"

namespace vaxcast::cli {

namespace fs = std::filesystem;
using ingest::format_number;
using io::Json;

namespace {

fs::path ratio_path(const PipelineConfig& c) { return c.out / "ratio.csv"; }
fs::path features_path(const PipelineConfig& c) { return c.out / "features.csv"; }
fs::path clinical_model_path(const PipelineConfig& c, const std::string& name) {
    return c.out / "models" / ("clinical_" + name + ".json");
}
fs::path web_model_path(const PipelineConfig& c, const Json& entry) {
    return c.out / "models" / ("web_" + web_slug(entry) + ".json");
}

void require_file(const fs::path& p, const char* producer) {
    if (!fs::is_regular_file(p)) {
        throw DomainError("missing " + p.string() + " (run '" + producer + "' first)");
    }
}

struct Prepared {
    DatedSeries target;
    regress::FeatureMatrix features;
};

Prepared load_prepared(const PipelineConfig& c) {
    require_file(ratio_path(c), "prep");
    require_file(features_path(c), "prep");
    return {ingest::read_series_csv(ratio_path(c)), io::read_feature_csv(features_path(c))};
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

eval::FittedRoster load_fitted(const PipelineConfig& c) {
    eval::FittedRoster fitted;
    for (const auto& e : c.clinical_models) {
        const auto p = clinical_model_path(c, e.name);
        require_file(p, "fit");
        fitted.clinical.push_back(io::fitted_clinical_from_json(io::read_json_file(p)));
    }
    for (const auto& e : c.web_models) {
        const auto p = web_model_path(c, e);
        require_file(p, "fit");
        fitted.web.push_back(io::fitted_web_from_json(io::read_json_file(p)));
    }
    return fitted;
}

}  // namespace

int cmd_prep(const PipelineConfig& config, std::ostream& log) {
    require_inputs(config);
    const DatedSeries doses = ingest::parse_clinical_csv(config.clinical);
    DatedSeries ratio = series::to_ratio(doses, config.population);
    ratio.set_name("ratio");

    std::vector<ingest::TrendsBatch> batches;
    std::size_t repairs = 0;
    for (const auto& p : config.trends) {
        auto repaired = ingest::repair_censoring(ingest::parse_trends_csv(p, config.reference_query));
        repairs += repaired.repairs;
        batches.push_back(std::move(repaired.batch));
    }
    const auto standardized = ingest::standardize_batches(batches);
    const auto categories = ingest::CategoryMap::load(config.categories);
    categories.validate();
    const auto attitudes = ingest::aggregate_categories(standardized, categories);
    const auto features = regress::build_features(attitudes, config.lag);
    const auto design = regress::build_design(attitudes, ratio, config.lag);

    io::write_text(ratio_path(config), ingest::series_csv(ratio, "ratio"));
    io::write_text(features_path(config), io::feature_csv(features));

    log << "censored cells repaired: " << repairs << " in " << batches.size() << " batches\n";
    log << "queries standardized: " << standardized.size() << "\n";
    log << "ratio.csv: " << ratio.size() << " rows, " << ratio.start_date().iso() << " to "
        << ratio.end_date().iso() << "\n";
    log << "features.csv: " << features.rows() << " rows, " << features.start_date().iso() << " to "
        << features.end_date().iso() << " (" << attitudes[0].size() - features.rows() << " lost to lag)\n";
    log << "aligned rows: " << design.x.rows() << "\n";
    for (const auto& w : design.warnings) log << "warning: " << w << "\n";
    return kSuccess;
}

int cmd_fit(const PipelineConfig& config, FitPart part, std::ostream& log) {
    const auto [target, features] = load_prepared(config);
    config.split.validate(target.size());
    const bool do_clinical = part != FitPart::web;
    const bool do_web = part != FitPart::clinical;

    eval::Roster roster;
    roster.arima_options = config.arima;
    roster.cv = config.cv;
    roster.svr = config.svr;
    roster.threads = config.threads;
    if (do_clinical) roster.clinical = config.clinical_models;
    if (do_web && !config.web_models.empty()) {
        const DatedSeries train = target.slice(0, config.split.train_len);
        const Date first = std::max(train.start_date(), features.start_date());
        const auto x_train = features.between(first, train.end_date());
        const auto y_train = train.between(first, train.end_date());
        for (const auto& e : config.web_models) {
            roster.web.push_back({expand_web_grid(e, config, x_train, y_train)});
        }
    }

    const auto fitted = eval::fit_roster(target, features, config.split, roster);

    Json failures = Json::array();
    if (fs::is_regular_file(config.out / "fit_failures.json")) {
        for (const auto& f : io::read_json_file(config.out / "fit_failures.json")) {
            const bool clinical = f.value("part", "") == "clinical";
            if ((clinical && !do_clinical) || (!clinical && !do_web)) failures.push_back(f);
        }
    }

    std::size_t ok = 0;
    if (do_clinical) {
        std::string scores = "entry,model,log_likelihood,aic,bic,dof,selected,error\n";
        for (std::size_t i = 0; i < fitted.clinical.size(); ++i) {
            const auto& m = fitted.clinical[i];
            io::write_text(clinical_model_path(config, m.name), io::dump(io::to_json(m)));
            for (const auto& cand : m.candidates) {
                const bool selected = m.fit && m.fit->spec == cand.spec;
                scores += csv_field(m.name) + "," + cand.spec.label() + ",";
                if (cand.score) {
                    scores += format_number(cand.score->log_likelihood) + "," + format_number(cand.score->aic) + "," +
                              format_number(cand.score->bic) + "," + std::to_string(cand.score->dof);
                } else {
                    scores += ",,,";
                }
                scores += std::string(",") + (selected ? "yes" : "no") + "," + csv_field(cand.error) + "\n";
            }
            if (m.fit) {
                ++ok;
                log << "clinical " << m.name << ": " << m.label() << "\n";
            } else {
                failures.push_back({{"part", "clinical"}, {"label", m.name}, {"error", m.error}});
                log << "clinical " << m.name << ": failed: " << m.error << "\n";
            }
        }
        io::write_text(config.out / "model_scores.csv", scores);
    }
    if (do_web) {
        for (std::size_t i = 0; i < fitted.web.size(); ++i) {
            const auto& m = fitted.web[i];
            io::write_text(web_model_path(config, config.web_models[i]), io::dump(io::to_json(m)));
            if (m.model) {
                ++ok;
                log << "web " << m.label << ": " << regress::describe(m.params) << "\n";
            } else {
                failures.push_back({{"part", "web"}, {"label", m.label}, {"error", m.error}});
                log << "web " << m.label << ": failed: " << m.error << "\n";
            }
        }
    }
    io::write_text(config.out / "fit_failures.json", io::dump(failures));
    log << "models fitted: " << ok << ", failures recorded: " << failures.size() << "\n";
    return failures.empty() ? kSuccess : kPartial;
}

int cmd_evaluate(const PipelineConfig& config, std::ostream& log) {
    const auto [target, features] = load_prepared(config);
    const auto fitted = load_fitted(config);
    const auto report = eval::evaluate_fitted(target, features, config.split, fitted, config.svr);
    const auto trend = series::segment_trend(target, config.breakpoints, config.steady_threshold);

    const std::size_t n_clinical = fitted.clinical.size();
    std::string single = "model,clinical,web\n";
    std::string all = "label,kind,clinical,web,rmse,error\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        std::string kind;
        if (r.stacked) {
            kind = r.weights && r.weights->method == stack::StackMethod::svr ? "svr_stack" : "ols_stack";
            if (!r.weights) kind = r.label.rfind("SVR", 0) == 0 ? "svr_stack" : "ols_stack";
        } else {
            kind = i < n_clinical ? "clinical" : "web";
            single += csv_field(r.label) + "," + (i < n_clinical ? cell(r.rmse) + "," : "," + cell(r.rmse)) + "\n";
        }
        all += csv_field(r.label) + "," + kind + "," + csv_field(r.clinical) + "," + csv_field(r.web) + "," +
               cell(r.rmse) + "," + csv_field(r.error) + "\n";
    }

    std::string stacked = "combination,ols,svr\n";
    for (const auto& w : fitted.web) {
        for (const auto& c : fitted.clinical) {
            const auto* o = report.find(eval::stack_label(stack::StackMethod::ols, c.name, w.label));
            const auto* s = report.find(eval::stack_label(stack::StackMethod::svr, c.name, w.label));
            stacked += csv_field(c.name + " + " + w.label) + "," + cell(o ? o->rmse : std::nullopt) + "," +
                       cell(s ? s->rmse : std::nullopt) + "\n";
        }
    }

    Json weights = Json::object();
    weights["best"] = report.best_stacked ? Json(report.rows[*report.best_stacked].label) : Json(nullptr);
    Json stacks = Json::array();
    for (const auto& r : report.rows) {
        if (!r.stacked) continue;
        Json s{{"label", r.label}, {"clinical", r.clinical}, {"web", r.web}};
        if (r.weights) s["weights"] = io::to_json(*r.weights);
        s["rmse"] = r.rmse ? Json(*r.rmse) : Json(nullptr);
        if (!r.error.empty()) s["error"] = r.error;
        stacks.push_back(std::move(s));
    }
    weights["stacks"] = std::move(stacks);

    std::string table7 = "date,actual,clinical,best_stack\n";
    const eval::ModelRow* best = report.best_stacked ? &report.rows[*report.best_stacked] : nullptr;
    const eval::ModelRow* clin = best && best->clinical_row ? &report.rows[*best->clinical_row] : nullptr;
    if (!clin && report.best_single && *report.best_single < n_clinical) clin = &report.rows[*report.best_single];
    for (std::size_t i = 0; i < report.actual.size(); ++i) {
        table7 += report.actual.date_at(i).iso() + "," + format_number(report.actual[i]) + ",";
        if (clin && clin->holdout) table7 += format_number((*clin->holdout)[i]);
        table7 += ",";
        if (best) table7 += format_number((*best->holdout)[i]);
        table7 += "\n";
    }

    std::string segments = "start,end,tau,label\n";
    Json trend_json = Json::array();
    for (const auto& s : trend.segments) {
        segments += s.first.iso() + "," + s.last.iso() + "," + format_number(s.tau) + "," +
                    std::string(series::to_string(s.label)) + "\n";
        trend_json.push_back({{"start", s.first.iso()},
                              {"end", s.last.iso()},
                              {"tau", s.tau},
                              {"label", std::string(series::to_string(s.label))}});
    }

    Json report_json = io::to_json(report);
    Json fit_errors = Json::array();
    for (const auto& f : fitted.failures()) fit_errors.push_back({{"label", f.label}, {"error", f.error}});
    report_json["fit_failures"] = std::move(fit_errors);
    report_json["trend_segments"] = std::move(trend_json);

    std::string text = eval::render_text(report);
    text += "\nTrend segments\n";
    for (const auto& s : trend.segments) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s to %s  %9.6f  %s\n", s.first.iso().c_str(), s.last.iso().c_str(), s.tau,
                      std::string(series::to_string(s.label)).c_str());
        text += buf;
    }

    io::write_text(config.out / "rmse_single.csv", single);
    io::write_text(config.out / "rmse_stacked.csv", stacked);
    io::write_text(config.out / "rmse_table.csv", all);
    io::write_text(config.out / "stack_weights.json", io::dump(weights));
    io::write_text(config.out / "forecast_7day.csv", table7);
    io::write_text(config.out / "trend_segments.csv", segments);
    io::write_text(config.out / "report.json", io::dump(report_json));
    io::write_text(config.out / "report.txt", text);

    std::size_t failed = 0;
    for (const auto& r : report.rows) failed += r.error.empty() ? 0 : 1;
    log << "rows evaluated: " << report.rows.size() << ", failed: " << failed << "\n";
    if (report.best) log << "best: " << report.rows[*report.best].label << "\n";
    if (best) log << "best stack: " << best->label << "\n";
    return failed == 0 && fitted.failures().empty() ? kSuccess : kPartial;
}

int cmd_forecast(const PipelineConfig& config, const ForecastOptions& options, std::ostream& log) {
    if (options.horizon < 0) throw DomainError("horizon must be non-negative");

    std::optional<Json> chosen;
    const fs::path weights_path = config.out / "stack_weights.json";
    if (!options.clinical_only || options.stack) require_file(weights_path, "evaluate");
    if (fs::is_regular_file(weights_path)) {
        const Json weights = io::read_json_file(weights_path);
        const Json label = options.stack ? Json(*options.stack) : weights.at("best");
        if (!label.is_null()) {
            for (const auto& s : weights.at("stacks")) {
                if (s.at("label") == label) chosen = s;
            }
            if (!chosen) throw DomainError("no stacked model labelled '" + label.get<std::string>() + "'");
        }
    }
    if (!options.clinical_only) {
        if (!chosen) throw DomainError("no stacked model available; use --clinical-only");
        if (!chosen->contains("weights")) {
            throw DomainError("stacked model '" + chosen->at("label").get<std::string>() +
                              "' failed: " + chosen->value("error", std::string()));
        }
    }

    std::string clinical_name;
    if (chosen) {
        clinical_name = chosen->at("clinical").get<std::string>();
    } else if (!config.clinical_models.empty()) {
        clinical_name = config.clinical_models.front().name;
    } else {
        throw DomainError("config lists no clinical model");
    }
    const fs::path cpath = clinical_model_path(config, clinical_name);
    require_file(cpath, "fit");
    const auto clinical = io::fitted_clinical_from_json(io::read_json_file(cpath));
    if (!clinical.fit) throw DomainError("clinical model " + clinical_name + " failed to fit: " + clinical.error);

    std::string csv = "date,clinical,web,forecast\n";
    if (options.horizon == 0) {
        io::write_text(config.out / "forecast.csv", csv);
        log << "horizon 0: nothing to forecast\n";
        return kSuccess;
    }

    const DatedSeries c = arima::forecast(*clinical.fit, options.horizon);
    std::optional<DatedSeries> w, combined;
    if (options.clinical_only) {
        const stack::StackWeights identity{0.0, 1.0, 0.0, stack::StackMethod::ols, std::nullopt};
        combined = stack::stack_predict(identity, c, c);
    } else {
        const std::string web_label = chosen->at("web").get<std::string>();
        std::optional<fs::path> wpath;
        for (const auto& e : config.web_models) {
            const auto p = web_model_path(config, e);
            if (fs::is_regular_file(p) && io::read_json_file(p).value("label", "") == web_label) wpath = p;
        }
        if (!wpath) throw DomainError("missing model file for web model " + web_label + " (run 'fit' first)");
        const auto web = io::fitted_web_from_json(io::read_json_file(*wpath));
        if (!web.model) throw DomainError("web model " + web_label + " failed to fit: " + web.error);

        require_file(features_path(config), "prep");
        const auto features = io::read_feature_csv(features_path(config));
        std::vector<std::string> missing;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Date d = c.date_at(i);
            if (d < features.start_date() || d > features.end_date()) missing.push_back(d.iso());
        }
        if (!missing.empty()) {
            std::string list;
            for (const auto& d : missing) list += (list.empty() ? "" : ", ") + d;
            throw DomainError("web features missing for " + list);
        }
        w = regress::predict(*web.model, features.between(c.start_date(), c.end_date()));
        combined = stack::stack_predict(io::stack_weights_from_json(chosen->at("weights")), c, *w);
    }

    for (std::size_t i = 0; i < c.size(); ++i) {
        csv += c.date_at(i).iso() + "," + format_number(c[i]) + "," + (w ? format_number((*w)[i]) : "") + "," +
               format_number((*combined)[i]) + "\n";
    }
    io::write_text(config.out / "forecast.csv", csv);
    log << "forecast: " << c.size() << " days from " << c.start_date().iso() << " using "
        << (options.clinical_only ? clinical.label() : chosen->at("label").get<std::string>()) << "\n";
    return kSuccess;
}

int cmd_keywords(const std::vector<fs::path>& inputs, const fs::path& out, std::size_t min_frequency,
                 std::ostream& log) {
    if (inputs.empty()) throw DomainError("keywords needs at least one input file");
    std::vector<std::string> documents;
    for (const auto& p : inputs) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw DomainError("cannot open " + p.string());
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) documents.push_back(std::move(line));
        }
    }
    const auto table = ingest::corpus_keywords(documents, min_frequency);
    io::write_text(out / "keywords.csv", ingest::keyword_csv(table));
    log << "documents: " << documents.size() << ", tokens: " << table.total_tokens
        << ", keywords kept: " << table.rows.size() << ", invalid bytes: " << table.invalid_bytes << "\n";
    return kSuccess;
}

}  // namespace vaxcast::cli
