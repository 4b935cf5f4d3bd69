#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vaxcast/regress/feature_matrix.hpp"
#include "vaxcast/regress/tree.hpp"

namespace vaxcast::regress {

enum class EnsembleKind { boost, random_forest };

std::string to_string(EnsembleKind kind);

struct TreeEnsembleModel {
    EnsembleKind kind = EnsembleKind::boost;
    std::vector<RegressionTree> trees;
    double learning_rate = 1.0;    ///< boost only
    double base_prediction = 0.0;  ///< boost only
    std::uint64_t seed = 0;
    std::vector<std::string> columns;

    friend bool operator==(const TreeEnsembleModel&, const TreeEnsembleModel&) = default;
};

struct BoostParams {
    int n_trees = 200;
    int max_depth = 3;
    double learning_rate = 0.1;
    std::size_t min_leaf = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const BoostParams&, const BoostParams&) = default;
};

struct ForestParams {
    int n_trees = 500;
    int max_depth = 0;         ///< 0 = unlimited
    std::size_t min_leaf = 5;
    std::size_t mtry = 0;      ///< 0 = ceil(cols / 3)
    bool bootstrap = true;
    std::uint64_t seed = 0;
    unsigned threads = 0;      ///< 0 = hardware concurrency; never affects the result

    friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

/// Squared-error gradient boosting: F_0 = mean(y), each tree fits y - F and
/// F += learning_rate * tree. Training error never increases from one tree to
/// the next.
TreeEnsembleModel fit_boost(const FeatureMatrix& x, const DatedSeries& y, const BoostParams& params = {});

/// Bagged CART trees with per-split feature sampling. Tree i draws from
/// Rng(seed, i), so the result is independent of the thread count.
TreeEnsembleModel fit_rf(const FeatureMatrix& x, const DatedSeries& y, const ForestParams& params = {});

/// Boost: base + lr * sum of trees, accumulated in tree order.
/// Forest: mean of the tree outputs, summed in sorted order so the result does
/// not depend on tree order, clamped to the range of those outputs.
double predict_row(const TreeEnsembleModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row);

DatedSeries predict(const TreeEnsembleModel& model, const FeatureMatrix& x);

}  // namespace vaxcast::regress
