#include "vaxcast/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vaxcast/error.hpp"

namespace vaxcast::eval {

double rmse(const DatedSeries& pred, const DatedSeries& actual) {
    require_same_dates(pred, actual, "rmse");
    double ss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) ss += (pred[i] - actual[i]) * (pred[i] - actual[i]);
    return std::sqrt(ss / static_cast<double>(pred.size()));
}

void SplitSpec::validate(std::size_t total) const {
    if (train_len < 1 || test_len < 1) throw DomainError("split: train and test lengths must be >= 1");
    if (train_len + test_len > total) {
        throw DomainError("split: " + std::to_string(train_len) + " + " + std::to_string(test_len) +
                          " exceeds the series length " + std::to_string(total));
    }
}

std::pair<DatedSeries, DatedSeries> holdout_split(const DatedSeries& series, const SplitSpec& spec) {
    spec.validate(series.size());
    return {series.slice(0, spec.train_len), series.slice(spec.train_len, spec.test_len)};
}

std::pair<regress::FeatureMatrix, regress::FeatureMatrix> holdout_split(const regress::FeatureMatrix& x,
                                                                        const SplitSpec& spec) {
    spec.validate(x.rows());
    return {x.slice(0, spec.train_len), x.slice(spec.train_len, spec.test_len)};
}

std::string FittedClinical::label() const { return fit ? fit->spec.label() : name; }

std::vector<FitFailure> FittedRoster::failures() const {
    std::vector<FitFailure> out;
    for (const auto& c : clinical) {
        if (!c.error.empty()) out.push_back({c.name, c.error});
    }
    for (const auto& w : web) {
        if (!w.error.empty()) out.push_back({w.label, w.error});
    }
    return out;
}

namespace {

// Feature rows inside [first, last], clipped to what the matrix covers.
regress::FeatureMatrix window(const regress::FeatureMatrix& x, Date first, Date last) {
    const Date a = std::max(first, x.start_date()), b = std::min(last, x.end_date());
    if (b < a) throw DomainError("no feature rows between " + first.iso() + " and " + last.iso());
    return x.between(a, b);
}

DatedSeries overlap(const DatedSeries& s, const DatedSeries& other) {
    const Date a = std::max(s.start_date(), other.start_date()), b = std::min(s.end_date(), other.end_date());
    if (b < a) throw DomainError("prediction streams share no dates");
    return s.between(a, b);
}

}  // namespace

FittedRoster fit_roster(const DatedSeries& target, const regress::FeatureMatrix& features, const SplitSpec& spec,
                        const Roster& roster) {
    spec.validate(target.size());
    const DatedSeries train = target.slice(0, spec.train_len);
    FittedRoster out;

    for (const auto& entry : roster.clinical) {
        FittedClinical m;
        m.name = entry.name;
        try {
            auto sel = arima::select_model(train, entry.p_candidates, entry.q_candidates, entry.criterion,
                                           roster.arima_options, roster.threads);
            m.fit = std::move(sel.best);
            m.candidates = std::move(sel.candidates);
        } catch (const std::exception& e) {
            m.error = e.what();
        }
        out.clinical.push_back(std::move(m));
    }

    std::optional<regress::FeatureMatrix> x;
    std::optional<DatedSeries> y;
    std::string design_error;
    try {
        x = window(features, train.start_date(), train.end_date());
        y = train.between(x->start_date(), x->end_date());
    } catch (const std::exception& e) {
        design_error = e.what();
    }
    for (const auto& entry : roster.web) {
        FittedWeb m;
        if (entry.grid.empty()) throw DomainError("web roster entry with an empty grid");
        m.label = regress::learner_label(entry.grid.front());
        m.params = entry.grid.front();
        if (!x) {
            m.error = design_error;
            out.web.push_back(std::move(m));
            continue;
        }
        try {
            auto grid = entry.grid;
            for (auto& g : grid) {
                if (auto* f = std::get_if<regress::ForestParams>(&g)) f->threads = roster.threads;
            }
            if (grid.size() > 1) {
                m.cv = regress::cross_validate(*x, *y, grid, roster.cv);
                m.params = grid[m.cv->chosen];
            } else {
                m.params = grid.front();
            }
            m.model = regress::fit(*x, *y, m.params);
        } catch (const std::exception& e) {
            m.error = e.what();
        }
        out.web.push_back(std::move(m));
    }
    return out;
}

DatedSeries in_sample(const FittedClinical& m) {
    if (!m.fit) throw DomainError(m.name + " was not fitted");
    return arima::in_sample_predictions(*m.fit);
}

DatedSeries in_sample(const FittedWeb& m, const regress::FeatureMatrix& features, Date first, Date last) {
    if (!m.model) throw DomainError(m.label + " was not fitted");
    return regress::predict(*m.model, window(features, first, last));
}

std::string stack_label(stack::StackMethod method, const std::string& clinical, const std::string& web) {
    return std::string(method == stack::StackMethod::ols ? "OLS" : "SVR") + " [" + clinical + " + " + web + "]";
}

const ModelRow* EvalReport::find(const std::string& label) const {
    for (const auto& r : rows) {
        if (r.label == label) return &r;
    }
    return nullptr;
}

EvalReport evaluate_fitted(const DatedSeries& target, const regress::FeatureMatrix& features, const SplitSpec& spec,
                           const FittedRoster& fitted, const stack::SvrParams& svr) {
    spec.validate(target.size());
    const DatedSeries train = target.slice(0, spec.train_len);
    EvalReport report{spec, target.slice(spec.train_len, spec.test_len), {}, {}, {}, {}};
    const Date test_first = report.actual.start_date(), test_last = report.actual.end_date();

    struct Stream {
        std::optional<DatedSeries> fitted, holdout;
        std::string error;
    };
    auto score = [&](ModelRow& row, const Stream& s) {
        if (!s.error.empty()) {
            row.error = s.error;
            return;
        }
        row.holdout = s.holdout;
        row.rmse = rmse(*s.holdout, report.actual);
    };

    std::vector<Stream> clinical, web;
    for (const auto& m : fitted.clinical) {
        Stream s;
        ModelRow row;
        row.label = m.label();
        try {
            if (!m.error.empty()) throw DomainError(m.error);
            s.fitted = overlap(in_sample(m), train);
            const DatedSeries f = arima::forecast(*m.fit, static_cast<int>(spec.test_len));
            if (f.start_date() != test_first) {
                throw DomainError(row.label + " was fitted on a window that does not end before " + test_first.iso());
            }
            s.holdout = f;
        } catch (const std::exception& e) {
            s.error = e.what();
        }
        score(row, s);
        report.rows.push_back(std::move(row));
        clinical.push_back(std::move(s));
    }
    for (const auto& m : fitted.web) {
        Stream s;
        ModelRow row;
        row.label = m.label;
        try {
            if (!m.error.empty()) throw DomainError(m.error);
            s.fitted = in_sample(m, features, train.start_date(), train.end_date());
            s.holdout = regress::predict(*m.model, features.between(test_first, test_last));
        } catch (const std::exception& e) {
            s.error = e.what();
        }
        score(row, s);
        report.rows.push_back(std::move(row));
        web.push_back(std::move(s));
    }

    const std::size_t singles = report.rows.size();
    for (const auto method : {stack::StackMethod::ols, stack::StackMethod::svr}) {
        for (std::size_t c = 0; c < clinical.size(); ++c) {
            for (std::size_t w = 0; w < web.size(); ++w) {
                ModelRow row;
                row.stacked = true;
                row.clinical = fitted.clinical[c].name;
                row.web = fitted.web[w].label;
                row.label = stack_label(method, row.clinical, row.web);
                row.clinical_row = c;
                row.web_row = clinical.size() + w;
                try {
                    const Stream& cs = clinical[c];
                    const Stream& ws = web[w];
                    if (!cs.error.empty()) throw DomainError(row.clinical + ": " + cs.error);
                    if (!ws.error.empty()) throw DomainError(row.web + ": " + ws.error);
                    const DatedSeries cf = overlap(*cs.fitted, *ws.fitted);
                    const DatedSeries wf = overlap(*ws.fitted, cf);
                    const DatedSeries act = train.between(cf.start_date(), cf.end_date());
                    row.weights = method == stack::StackMethod::ols ? stack::stack_ols(act, cf, wf)
                                                                    : stack::stack_svr(act, cf, wf, svr);
                    row.holdout = stack::stack_predict(*row.weights, *cs.holdout, *ws.holdout);
                    row.rmse = rmse(*row.holdout, report.actual);
                } catch (const std::exception& e) {
                    row.error = e.what();
                    row.holdout.reset();
                    row.rmse.reset();
                }
                report.rows.push_back(std::move(row));
            }
        }
    }

    auto argmin = [&](std::size_t from, std::size_t to) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        for (std::size_t i = from; i < to; ++i) {
            const auto& r = report.rows[i].rmse;
            if (r && (!best || *r < *report.rows[*best].rmse)) best = i;
        }
        return best;
    };
    report.best_single = argmin(0, singles);
    report.best_stacked = argmin(singles, report.rows.size());
    report.best = argmin(0, report.rows.size());
    return report;
}

EvalReport compare_models(const DatedSeries& target, const regress::FeatureMatrix& features, const Roster& roster,
                          const SplitSpec& spec) {
    if (roster.clinical.empty() && roster.web.empty()) throw DomainError("compare_models: empty roster");
    return evaluate_fitted(target, features, spec, fit_roster(target, features, spec, roster), roster.svr);
}

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right = false) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

void table(std::string& out, const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> widths;
    for (const auto& row : cells) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t j = 0; j < row.size(); ++j) widths[j] = std::max(widths[j], row[j].size());
    }
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) line += "  ";
            line += pad(row[j], widths[j], j > 0);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
}

}  // namespace

std::string render_text(const EvalReport& report) {
    std::string out;
    auto rmse_rows = [&](bool stacked) {
        std::vector<std::vector<std::string>> cells{{"Model", "RMSE"}};
        for (const auto& r : report.rows) {
            if (r.stacked != stacked) continue;
            cells.push_back({r.label, r.rmse ? fixed(*r.rmse) : "failed"});
        }
        return cells;
    };
    out += "Single models (holdout " + report.actual.start_date().iso() + " to " + report.actual.end_date().iso() + ")\n";
    table(out, rmse_rows(false));
    out += "\nStacked models\n";
    table(out, rmse_rows(true));
    if (report.best) out += "\nBest: " + report.rows[*report.best].label + '\n';

    if (report.best_stacked) {
        const auto& best = report.rows[*report.best_stacked];
        const ModelRow* clinical = best.clinical_row ? &report.rows[*best.clinical_row] : nullptr;
        out += "\nHoldout forecasts\n";
        std::vector<std::vector<std::string>> cells{{"Date", "Actual"}};
        if (clinical) cells[0].push_back(clinical->label);
        cells[0].push_back(best.label);
        for (std::size_t i = 0; i < report.actual.size(); ++i) {
            std::vector<std::string> row{report.actual.date_at(i).iso(), fixed(report.actual[i])};
            if (clinical) row.push_back(fixed((*clinical->holdout)[i]));
            row.push_back(fixed((*best.holdout)[i]));
            cells.push_back(std::move(row));
        }
        table(out, cells);
    }
    return out;
}

}  // namespace vaxcast::eval
