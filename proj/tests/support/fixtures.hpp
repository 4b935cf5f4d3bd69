#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vaxcast/dated_series.hpp"
#include "vaxcast/random.hpp"
#include "vaxcast/regress/feature_matrix.hpp"

namespace fixture {

inline const vaxcast::Date kStart{2021, 1, 1};

inline vaxcast::DatedSeries series(std::vector<double> v, std::string name = "y") {
    return {kStart, std::move(v), std::move(name)};
}

inline std::vector<std::string> names(std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back("x" + std::to_string(j + 1));
    return out;
}

inline vaxcast::regress::FeatureMatrix matrix(const Eigen::MatrixXd& values) {
    return {kStart, names(static_cast<std::size_t>(values.cols())), values};
}

inline Eigen::MatrixXd normal_matrix(vaxcast::Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

inline std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd& m, bool with_intercept) {
    std::vector<std::vector<double>> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> r;
        if (with_intercept) r.push_back(1.0);
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fixture
