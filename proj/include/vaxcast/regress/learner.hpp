#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vaxcast/regress/ensemble.hpp"
#include "vaxcast/regress/linear.hpp"

namespace vaxcast::regress {

struct OlsParams {
    friend bool operator==(const OlsParams&, const OlsParams&) = default;
};

struct LassoParams {
    double lambda = 0.0;
    friend bool operator==(const LassoParams&, const LassoParams&) = default;
};

using LearnerParams = std::variant<OlsParams, LassoParams, BoostParams, ForestParams>;
using Model = std::variant<LinearModel, TreeEnsembleModel>;

/// "OLS", "LASSO", "Boost", "Randomforest"
std::string learner_label(const LearnerParams& params);
/// Short human-readable setting, e.g. "lambda=0.01" or "trees=200 depth=3 lr=0.1".
std::string describe(const LearnerParams& params);

Model fit(const FeatureMatrix& x, const DatedSeries& y, const LearnerParams& params);
DatedSeries predict(const Model& model, const FeatureMatrix& x);

struct CvOptions {
    int folds = 10;
    bool shuffle = false;  ///< random fold membership instead of contiguous time blocks
    std::uint64_t seed = 0;
};

struct CvReport {
    std::vector<LearnerParams> grid;
    std::vector<std::vector<double>> fold_errors;  ///< [setting][fold] RMSE; +inf when the fit failed
    std::vector<double> mean_errors;
    std::vector<std::size_t> fold_sizes;
    std::size_t chosen = 0;
};

/// Fold sizes for n rows in k folds: the first n % k folds get one extra row.
std::vector<std::size_t> fold_sizes(std::size_t n, int k);

/// k-fold CV over `grid`. The winner has the smallest mean fold RMSE; exact
/// ties go to the lower-capacity setting, then the earlier one.
CvReport cross_validate(const FeatureMatrix& x, const DatedSeries& y, const std::vector<LearnerParams>& grid,
                        const CvOptions& options = {});

}  // namespace vaxcast::regress
