#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::regress {

/// Daily design matrix: row i belongs to `start + i`.
class FeatureMatrix {
public:
    FeatureMatrix(Date start, std::vector<std::string> columns, Eigen::MatrixXd values);

    Date start_date() const noexcept { return start_; }
    Date end_date() const noexcept { return start_ + static_cast<long>(values_.rows()) - 1; }
    Date date_at(std::size_t i) const noexcept { return start_ + static_cast<long>(i); }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    const std::vector<std::string>& column_names() const noexcept { return columns_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    std::optional<std::size_t> column_index(const std::string& name) const;

    FeatureMatrix slice(std::size_t offset, std::size_t count) const;
    /// Inclusive date range; DomainError when not fully covered.
    FeatureMatrix between(Date first, Date last) const;
    /// Rows picked by position, in the given order; dates are renumbered from start.
    FeatureMatrix take_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
        return a.start_ == b.start_ && a.columns_ == b.columns_ && a.values_ == b.values_;
    }

private:
    Date start_;
    std::vector<std::string> columns_;
    Eigen::MatrixXd values_;
};

struct Design {
    FeatureMatrix x;
    DatedSeries y;
    std::vector<std::string> warnings;
};

/// Columns: each input series at t, then each at t - lag (named "<name>_lag<lag>").
/// Rows cover the dates where every column is defined.
FeatureMatrix build_features(std::span<const DatedSeries> attitudes, int lag = 1);

/// build_features aligned with `target`; the rows are the dates shared by both.
/// Constant columns are kept and reported in `warnings`.
Design build_design(std::span<const DatedSeries> attitudes, const DatedSeries& target, int lag = 1);

/// Throws DomainError unless `y` covers exactly the rows of `x`.
void require_aligned(const FeatureMatrix& x, const DatedSeries& y, const char* what);

}  // namespace vaxcast::regress
