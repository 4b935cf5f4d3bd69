#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::arima {

struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;

    /// Throws DomainError unless p, q >= 0, p + q >= 1 and d is 0 or 1.
    void validate() const;
    /// "AR(7)" for pure autoregressions, otherwise "ARIMA(7,0,8)".
    std::string label() const;

    friend bool operator==(const ArimaSpec&, const ArimaSpec&) = default;
};

struct FitOptions {
    int max_iterations = 500;
    double rel_tolerance = 1e-8;
};

struct ConvergenceInfo {
    int nelder_mead_iterations = 0;
    int bfgs_iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string reason;
    int max_iterations = 500;
    double rel_tolerance = 1e-8;
};

/// Estimated model in intercept form:
///   w_t = intercept + sum_i ar_i w_{t-i} + sum_k ma_k e_{t-k} + e_t,
/// where w is the series differenced `spec.d` times.
struct ArimaFit {
    ArimaSpec spec;
    double intercept = 0.0;
    double mean = 0.0;  ///< process mean of w, intercept / (1 - sum ar)
    std::vector<double> ar_weights;
    std::vector<double> ma_weights;
    double innovation_variance = 0.0;
    std::vector<double> residuals;  ///< one-step filter prediction errors, one per w_t
    double log_likelihood = 0.0;
    std::size_t n_obs = 0;
    /// Smallest root moduli of the AR and MA polynomials (infinity when absent).
    double ar_root_modulus = 0.0;
    double ma_root_modulus = 0.0;
    /// A root lies within 1e-4 of the unit circle.
    bool boundary = false;
    ConvergenceInfo convergence;
    /// The series the model was fitted to (undifferenced).
    std::vector<double> history;
    Date history_start;

    DatedSeries history_series() const;
};

struct ModelScore {
    ArimaSpec spec;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    int dof = 0;
    std::size_t n_obs = 0;
};

/// Pure autoregression, identical to fit_arima(series, {p, 0, 0}).
ArimaFit fit_ar(const DatedSeries& series, int p, const FitOptions& options = {});

/// Exact Gaussian maximum likelihood. Start values come from a Hannan-Rissanen
/// regression; Nelder-Mead then BFGS run in an unconstrained parameterisation
/// that keeps the AR part stationary and the MA part invertible.
/// Throws EstimationError (carrying the last iterate as ar..., ma...) when the
/// optimizer hits its iteration limit.
ArimaFit fit_arima(const DatedSeries& series, const ArimaSpec& spec, const FitOptions& options = {});

/// aic = -2 ll + 2 dof, bic = -2 ll + ln(n_obs) dof, dof = p + q + 2.
ModelScore information_criteria(const ArimaFit& fit);

enum class Criterion { aic, bic, parsimony };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& name);

struct CandidateResult {
    ArimaSpec spec;
    std::optional<ModelScore> score;
    std::string error;  ///< set when the fit failed
};

struct Selection {
    ArimaFit best;
    ModelScore best_score;
    std::vector<CandidateResult> candidates;  ///< p-major grid order
};

/// Fits every (p, 0, q) on the grid and picks a winner.
///
/// `aic` / `bic` take the minimum of that column. `parsimony` starts from the
/// minimum-BIC model and then prefers the fewest parameters among models whose
/// BIC ties it or whose AIC lies within 1 of its AIC.
///
/// Candidates run on up to `threads` workers (0 = hardware concurrency);
/// results do not depend on the thread count.
Selection select_model(const DatedSeries& series, std::span<const int> p_candidates,
                       std::span<const int> q_candidates, Criterion criterion,
                       const FitOptions& options = {}, unsigned threads = 0);

/// Iterated conditional-expectation forecasts (future innovations 0), dated
/// from the day after the fitted series ends.
DatedSeries forecast(const ArimaFit& fit, int horizon);

/// One-step-ahead in-sample predictions, series minus residuals. For d = 1 the
/// first date has no prediction and is omitted.
DatedSeries in_sample_predictions(const ArimaFit& fit);

}  // namespace vaxcast::arima
