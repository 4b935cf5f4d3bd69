#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vaxcast/arima/arima.hpp"
#include "vaxcast/regress/learner.hpp"
#include "vaxcast/stack/stacker.hpp"

namespace vaxcast::eval {

/// sqrt(mean((pred - actual)^2)); DomainError unless the dates match.
double rmse(const DatedSeries& pred, const DatedSeries& actual);

struct SplitSpec {
    std::size_t train_len = 212;
    std::size_t test_len = 7;

    /// Throws DomainError unless both parts are non-empty and fit in `total`.
    void validate(std::size_t total) const;
};

/// First train_len values, then the test_len values that follow them.
std::pair<DatedSeries, DatedSeries> holdout_split(const DatedSeries& series, const SplitSpec& spec);
std::pair<regress::FeatureMatrix, regress::FeatureMatrix> holdout_split(const regress::FeatureMatrix& x,
                                                                        const SplitSpec& spec);

/// Clinical roster entry: the best (p, 0, q) over the grid. A single p with
/// q = {0} is a plain autoregression.
struct ClinicalEntry {
    std::string name;  ///< short name used in stacked labels, e.g. "AR", "ARIMA"
    std::vector<int> p_candidates;
    std::vector<int> q_candidates;
    arima::Criterion criterion = arima::Criterion::parsimony;
};

/// Web roster entry: cross-validated over `grid` (a single setting skips CV).
struct WebEntry {
    std::vector<regress::LearnerParams> grid;
};

struct Roster {
    std::vector<ClinicalEntry> clinical;
    std::vector<WebEntry> web;
    arima::FitOptions arima_options;
    regress::CvOptions cv;
    stack::SvrParams svr;
    unsigned threads = 0;
};

/// One fitted roster entry; `error` is set (and the model absent) when fitting failed.
struct FittedClinical {
    std::string name;
    std::optional<arima::ArimaFit> fit;
    std::vector<arima::CandidateResult> candidates;
    std::string error;

    /// Spec label of the fitted model, or the entry name when the fit failed.
    std::string label() const;
};

struct FittedWeb {
    std::string label;
    regress::LearnerParams params;
    std::optional<regress::Model> model;
    std::optional<regress::CvReport> cv;
    std::string error;
};

struct FitFailure {
    std::string label;
    std::string error;
};

struct FittedRoster {
    std::vector<FittedClinical> clinical;
    std::vector<FittedWeb> web;

    std::vector<FitFailure> failures() const;
};

/// Fits every roster entry on the training window: clinical models on the
/// first train_len values of `target`, web models on the feature rows dated
/// inside that window. A failing entry keeps its slot with `error` set.
FittedRoster fit_roster(const DatedSeries& target, const regress::FeatureMatrix& features, const SplitSpec& spec,
                        const Roster& roster);

struct ModelRow {
    std::string label;
    bool stacked = false;
    std::string clinical;  ///< stacked rows: component names
    std::string web;
    std::optional<std::size_t> clinical_row;  ///< stacked rows: indices of the component rows
    std::optional<std::size_t> web_row;
    std::optional<stack::StackWeights> weights;
    std::optional<double> rmse;
    std::optional<DatedSeries> holdout;  ///< predictions on the test dates
    std::string error;                   ///< set when the row could not be produced
};

struct EvalReport {
    SplitSpec split;
    DatedSeries actual;  ///< test-window targets
    std::vector<ModelRow> rows;
    std::optional<std::size_t> best;          ///< lowest rmse over all rows
    std::optional<std::size_t> best_stacked;  ///< lowest rmse over stacked rows
    std::optional<std::size_t> best_single;   ///< lowest rmse over base rows

    const ModelRow* find(const std::string& label) const;
};

/// Label of a stacked row, e.g. "SVR [ARIMA + Boost]".
std::string stack_label(stack::StackMethod method, const std::string& clinical, const std::string& web);

/// Scores fitted base models on the test window, then every
/// (clinical, web, method) stack. Stackers train on the dates where both base
/// models have in-sample predictions inside the training window. Rows keep
/// roster order: clinical, web, then OLS stacks and SVR stacks.
EvalReport evaluate_fitted(const DatedSeries& target, const regress::FeatureMatrix& features, const SplitSpec& spec,
                           const FittedRoster& fitted, const stack::SvrParams& svr);

/// fit_roster followed by evaluate_fitted.
EvalReport compare_models(const DatedSeries& target, const regress::FeatureMatrix& features, const Roster& roster,
                          const SplitSpec& spec);

/// In-sample predictions of a fitted model over the training window.
DatedSeries in_sample(const FittedClinical& m);
DatedSeries in_sample(const FittedWeb& m, const regress::FeatureMatrix& features, Date first, Date last);

/// Aligned text tables: single models, stacked models, holdout forecasts.
std::string render_text(const EvalReport& report);

}  // namespace vaxcast::eval
