#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "vaxcast/random.hpp"

namespace vaxcast::regress {

/// Internal node when `feature >= 0`: rows with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree; node 0 is the root.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    std::size_t depth() const;
    friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct TreeParams {
    int max_depth = 0;         ///< 0 = unlimited
    std::size_t min_leaf = 1;  ///< minimum samples (with multiplicity) per leaf
    std::size_t mtry = 0;      ///< features tried per split; 0 = all
};

/// CART with squared-error splits at midpoints between distinct values.
/// `sample` lists training rows (repeats allowed, as in a bootstrap).
/// Ties go to the lowest column, then the lowest threshold. Leaf values are
/// node means clamped to the node's observed range. `rng` is needed only
/// when mtry < number of columns.
RegressionTree fit_tree(const Eigen::MatrixXd& x, std::span<const double> y,
                        std::span<const std::size_t> sample, const TreeParams& params, Rng* rng = nullptr);

}  // namespace vaxcast::regress
