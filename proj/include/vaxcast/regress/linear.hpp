#pragma once

#include <string>
#include <vector>

#include "vaxcast/regress/feature_matrix.hpp"

namespace vaxcast::regress {

/// y = intercept + sum_j weights[j] * x_j
struct LinearModel {
    double intercept = 0.0;
    std::vector<double> weights;
    std::vector<std::string> columns;
    double regularization = 0.0;  ///< lambda; 0 for OLS

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// Least squares via column-pivoted QR. RankError names dependent columns.
LinearModel fit_ols(const FeatureMatrix& x, const DatedSeries& y);

struct LassoOptions {
    int max_sweeps = 100000;
    /// Stop when no standardised coefficient moves by more than this in a sweep.
    double tolerance = 1e-12;
};

/// Minimises (1/2n)||y - a - Zb||^2 + lambda ||b||_1 by cyclic coordinate
/// descent, Z the columns scaled to zero mean and unit (population) variance.
/// Weights are reported on the original scale; constant columns get weight 0.
LinearModel fit_lasso(const FeatureMatrix& x, const DatedSeries& y, double lambda,
                      const LassoOptions& options = {});

/// Smallest lambda giving the all-zero model: max_j |z_j'(y - mean y)| / n.
double lasso_lambda_max(const FeatureMatrix& x, const DatedSeries& y);

/// `count` log-spaced values from lambda_max down to lambda_max * min_ratio.
std::vector<double> lasso_lambda_grid(const FeatureMatrix& x, const DatedSeries& y, int count = 50,
                                      double min_ratio = 1e-4);

DatedSeries predict(const LinearModel& model, const FeatureMatrix& x);

}  // namespace vaxcast::regress
