#include "vaxcast/regress/linear.hpp"

#include <cmath>

#include "linalg/least_squares.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::regress {

namespace {

struct Standardized {
    std::vector<std::vector<double>> z;  // per column; empty when the column is constant
    std::vector<double> mean, sd;
    std::vector<double> yc;
    double ymean = 0.0;
};

Standardized standardize(const FeatureMatrix& x, const DatedSeries& y) {
    const std::size_t n = x.rows(), k = x.cols();
    const double dn = static_cast<double>(n);
    Standardized s;
    s.z.resize(k);
    s.mean.resize(k);
    s.sd.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = x.values().col(static_cast<Eigen::Index>(j));
        std::vector<double> c(col.data(), col.data() + n);
        const double m = simd::sum(c) / dn;
        for (double& v : c) v -= m;
        const double sd = std::sqrt(simd::dot(c, c) / dn);
        s.mean[j] = m;
        s.sd[j] = sd;
        if (sd > 0.0) {
            for (double& v : c) v /= sd;
            s.z[j] = std::move(c);
        }
    }
    s.ymean = simd::sum(y.values()) / dn;
    s.yc.assign(y.values().begin(), y.values().end());
    for (double& v : s.yc) v -= s.ymean;
    return s;
}

double soft_threshold(double v, double lambda) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
}

}  // namespace

LinearModel fit_ols(const FeatureMatrix& x, const DatedSeries& y) {
    require_aligned(x, y, "fit_ols");
    const auto n = static_cast<Eigen::Index>(x.rows()), k = static_cast<Eigen::Index>(x.cols());
    if (n < k + 1) throw DomainError("fit_ols: need more rows than columns");
    Eigen::MatrixXd design(n, k + 1);
    design.col(0).setOnes();
    design.rightCols(k) = x.values();
    std::vector<std::string> names{"(intercept)"};
    names.insert(names.end(), x.column_names().begin(), x.column_names().end());
    const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(y.values().data(), n);

    const auto ls = linalg::least_squares(design, target, names);
    LinearModel m;
    m.intercept = ls.coef(0);
    m.weights.assign(ls.coef.data() + 1, ls.coef.data() + 1 + k);
    m.columns = x.column_names();
    return m;
}

double lasso_lambda_max(const FeatureMatrix& x, const DatedSeries& y) {
    require_aligned(x, y, "lasso_lambda_max");
    const auto s = standardize(x, y);
    const double dn = static_cast<double>(x.rows());
    double best = 0.0;
    for (const auto& z : s.z) {
        if (!z.empty()) best = std::max(best, std::abs(simd::dot(z, s.yc) / dn));
    }
    return best;
}

std::vector<double> lasso_lambda_grid(const FeatureMatrix& x, const DatedSeries& y, int count, double min_ratio) {
    if (count < 1) throw DomainError("lambda grid needs at least one point");
    if (!(min_ratio > 0.0 && min_ratio <= 1.0)) throw DomainError("lambda grid ratio must lie in (0, 1]");
    const double top = lasso_lambda_max(x, y);
    if (count == 1) return {top};
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] = top * std::pow(min_ratio, static_cast<double>(i) / (count - 1));
    }
    return grid;
}

LinearModel fit_lasso(const FeatureMatrix& x, const DatedSeries& y, double lambda, const LassoOptions& options) {
    require_aligned(x, y, "fit_lasso");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("fit_lasso: lambda must be finite and >= 0");
    const std::size_t n = x.rows(), k = x.cols();
    if (n < k + 1) throw DomainError("fit_lasso: need more rows than columns");
    const double dn = static_cast<double>(n);
    auto s = standardize(x, y);

    std::vector<double> beta(k, 0.0);
    std::vector<double> r = s.yc;
    int sweep = 0;
    double change = 0.0;
    for (; sweep < options.max_sweeps; ++sweep) {
        change = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (s.z[j].empty()) continue;
            const double rho = simd::dot(s.z[j], r) / dn + beta[j];
            const double next = soft_threshold(rho, lambda);
            const double delta = next - beta[j];
            if (delta != 0.0) {
                simd::axpy(-delta, s.z[j], r);
                beta[j] = next;
                change = std::max(change, std::abs(delta));
            }
        }
        if (change <= options.tolerance) break;
    }
    if (sweep == options.max_sweeps) {
        double objective = simd::dot(r, r) / (2.0 * dn);
        for (double b : beta) objective += lambda * std::abs(b);
        throw EstimationError("fit_lasso: no convergence after " + std::to_string(options.max_sweeps) + " sweeps",
                              beta, objective);
    }

    LinearModel m;
    m.columns = x.column_names();
    m.regularization = lambda;
    m.weights.assign(k, 0.0);
    m.intercept = s.ymean;
    for (std::size_t j = 0; j < k; ++j) {
        if (beta[j] == 0.0) continue;
        m.weights[j] = beta[j] / s.sd[j];
        m.intercept -= m.weights[j] * s.mean[j];
    }
    return m;
}

DatedSeries predict(const LinearModel& model, const FeatureMatrix& x) {
    if (model.columns != x.column_names()) throw DomainError("predict: feature columns differ from the training columns");
    std::vector<double> out(x.rows());
    const auto& v = x.values();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double acc = model.intercept;
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            acc += model.weights[j] * v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        out[i] = acc;
    }
    return {x.start_date(), std::move(out), "prediction"};
}

}  // namespace vaxcast::regress
