#pragma once

// Column-pivoted QR least squares shared by the regression-style estimators
// (OLS, stacking, the ADF regression, Hannan-Rissanen start values).

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace vaxcast::linalg {

struct LeastSquaresFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    /// (X'X)^-1; filled only when requested.
    Eigen::MatrixXd xtx_inverse;
};

/// Relative pivot threshold below which a column counts as dependent.
inline constexpr double kRankTolerance = 1e-10;

/// Solves min ||y - X b||. Throws RankError naming the dependent columns
/// (`names[j]` labels column j) when X lacks full column rank.
LeastSquaresFit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              std::span<const std::string> names, bool want_inverse = false);

}  // namespace vaxcast::linalg
