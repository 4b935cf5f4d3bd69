#include "vaxcast/regress/feature_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "vaxcast/error.hpp"

namespace vaxcast::regress {

FeatureMatrix::FeatureMatrix(Date start, std::vector<std::string> columns, Eigen::MatrixXd values)
    : start_(start), columns_(std::move(columns)), values_(std::move(values)) {
    if (values_.cols() < 1 || values_.rows() < 1) throw DomainError("feature matrix is empty");
    if (columns_.size() != static_cast<std::size_t>(values_.cols())) {
        throw DomainError("feature matrix: column name count does not match the data");
    }
    if (!values_.allFinite()) throw DomainError("feature matrix contains non-finite values");
}

std::optional<std::size_t> FeatureMatrix::column_index(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - columns_.begin());
}

FeatureMatrix FeatureMatrix::slice(std::size_t offset, std::size_t count) const {
    if (count == 0 || offset + count > rows()) throw DomainError("feature matrix slice out of range");
    return {date_at(offset), columns_,
            values_.middleRows(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(count))};
}

FeatureMatrix FeatureMatrix::between(Date first, Date last) const {
    if (first < start_ || last > end_date() || last < first) {
        throw DomainError("features do not cover " + first.iso() + " to " + last.iso());
    }
    return slice(static_cast<std::size_t>(first - start_), static_cast<std::size_t>(last - first) + 1);
}

FeatureMatrix FeatureMatrix::take_rows(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return {start_, columns_, std::move(out)};
}

FeatureMatrix build_features(std::span<const DatedSeries> attitudes, int lag) {
    if (attitudes.empty()) throw DomainError("build_features: no input series");
    if (lag < 0) throw DomainError("build_features: lag must be >= 0");
    Date first = attitudes[0].start_date(), last = attitudes[0].end_date();
    for (const auto& s : attitudes) {
        first = std::max(first, s.start_date());
        last = std::min(last, s.end_date());
    }
    first = first + lag;
    if (last < first) throw DomainError("build_features: series do not overlap after lagging");

    const auto n = static_cast<std::size_t>(last - first) + 1;
    const std::size_t k = attitudes.size();
    std::vector<std::string> names;
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(lag > 0 ? 2 * k : k));
    for (std::size_t j = 0; j < k; ++j) {
        const auto& s = attitudes[j];
        names.push_back(s.name().empty() ? "x" + std::to_string(j + 1) : s.name());
        const std::size_t off = static_cast<std::size_t>(first - s.start_date());
        for (std::size_t i = 0; i < n; ++i) values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[off + i];
    }
    if (lag > 0) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto& s = attitudes[j];
            names.push_back(names[j] + "_lag" + std::to_string(lag));
            const std::size_t off = static_cast<std::size_t>(first - lag - s.start_date());
            for (std::size_t i = 0; i < n; ++i) {
                values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k + j)) = s[off + i];
            }
        }
    }
    return {first, std::move(names), std::move(values)};
}

Design build_design(std::span<const DatedSeries> attitudes, const DatedSeries& target, int lag) {
    const FeatureMatrix all = build_features(attitudes, lag);
    const Date first = std::max(all.start_date(), target.start_date());
    const Date last = std::min(all.end_date(), target.end_date());
    if (last < first) throw DomainError("build_design: features and target share no dates");

    Design out{all.between(first, last), target.between(first, last), {}};
    const auto& v = out.x.values();
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        if (v.col(j).minCoeff() == v.col(j).maxCoeff()) {
            out.warnings.push_back("column " + out.x.column_names()[static_cast<std::size_t>(j)] + " is constant");
        }
    }
    return out;
}

void require_aligned(const FeatureMatrix& x, const DatedSeries& y, const char* what) {
    if (x.start_date() != y.start_date() || x.rows() != y.size()) {
        throw DomainError(std::string(what) + ": target dates do not match the feature rows");
    }
}

}  // namespace vaxcast::regress
