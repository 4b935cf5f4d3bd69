#pragma once

#include <array>
#include <optional>
#include <string>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::stack {

enum class StackMethod { ols, svr };

std::string to_string(StackMethod m);

struct SvrParams {
    double epsilon = 0.1;  ///< tube half-width, in ratio units
    double lambda = 1.0;   ///< weight penalty
    bool penalize_intercept = true;

    void validate() const;
    friend bool operator==(const SvrParams&, const SvrParams&) = default;
};

/// E(t) = intercept + clinical_weight * clinical(t) + web_weight * web(t)
struct StackWeights {
    double intercept = 0.0;
    double clinical_weight = 0.0;
    double web_weight = 0.0;
    StackMethod method = StackMethod::ols;
    std::optional<SvrParams> svr;  ///< set iff method == svr

    friend bool operator==(const StackWeights&, const StackWeights&) = default;
};

/// Least squares on (1, clinical, web). RankError when the predictions are collinear.
StackWeights stack_ols(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web);

/// 0 inside the tube |r| < epsilon, |r| - epsilon outside.
double svr_loss(double r, const SvrParams& params);

/// sum_t loss(actual - fitted) + lambda/2 (mu^2 + bc^2 + bw^2), mu^2 dropped
/// when the intercept is not penalised.
double svr_objective(const StackWeights& w, const DatedSeries& actual, const DatedSeries& clinical,
                     const DatedSeries& web, const SvrParams& params);

struct SvrOptions {
    /// Accept when the duality gap is at most tolerance * max(1, |objective|).
    double tolerance = 1e-10;
    int max_steps = 20000;
    /// Primal starting point (mu, bc, bw); zero when absent.
    std::optional<std::array<double, 3>> start;
};

/// Linear epsilon-insensitive regression on the two prediction streams.
/// Newton steps on a progressively less rounded loss, then the optimality
/// system of the identified active set is solved exactly. Optimality is
/// certified by the duality gap; EstimationError when it does not close.
StackWeights stack_svr(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web,
                       const SvrParams& params, const SvrOptions& options = {});

/// intercept + bc * clinical + bw * web, per date.
DatedSeries stack_predict(const StackWeights& w, const DatedSeries& clinical, const DatedSeries& web);

}  // namespace vaxcast::stack
