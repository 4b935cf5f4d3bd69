#include "vaxcast/arima/constraints.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace vaxcast::arima {

std::vector<double> pacf_to_ar(std::span<const double> partials) {
    const std::size_t p = partials.size();
    std::vector<double> phi(p, 0.0), prev(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const double r = partials[k];
        for (std::size_t j = 0; j < k; ++j) phi[j] = prev[j] - r * prev[k - 1 - j];
        phi[k] = r;
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(k + 1), prev.begin());
    }
    return phi;
}

std::optional<std::vector<double>> ar_to_pacf(std::span<const double> ar) {
    const std::size_t p = ar.size();
    std::vector<double> cur(ar.begin(), ar.end()), next(p);
    std::vector<double> partials(p);
    for (std::size_t k = p; k-- > 0;) {
        const double r = cur[k];
        if (!(std::abs(r) < 1.0)) return std::nullopt;
        partials[k] = r;
        const double den = 1.0 - r * r;
        for (std::size_t j = 0; j < k; ++j) next[j] = (cur[j] + r * cur[k - 1 - j]) / den;
        std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(k), cur.begin());
    }
    return partials;
}

std::vector<double> constrain_ar(std::span<const double> free) {
    std::vector<double> partials(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) partials[i] = std::tanh(free[i]);
    return pacf_to_ar(partials);
}

std::vector<double> constrain_ma(std::span<const double> free) {
    auto theta = constrain_ar(free);
    for (double& t : theta) t = -t;
    return theta;
}

std::optional<std::vector<double>> unconstrain_ar(std::span<const double> ar) {
    auto partials = ar_to_pacf(ar);
    if (!partials) return std::nullopt;
    for (double& r : *partials) r = std::atanh(r);
    return partials;
}

std::optional<std::vector<double>> unconstrain_ma(std::span<const double> ma) {
    std::vector<double> neg(ma.begin(), ma.end());
    for (double& t : neg) t = -t;
    return unconstrain_ar(neg);
}

double min_root_modulus(std::span<const double> coefficients) {
    std::size_t k = coefficients.size();
    while (k > 0 && coefficients[k - 1] == 0.0) --k;
    if (k == 0) return std::numeric_limits<double>::infinity();
    // roots of the polynomial are reciprocals of the companion eigenvalues
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) companion(0, static_cast<Eigen::Index>(j)) = coefficients[j];
    for (std::size_t i = 1; i < k; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    double largest = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) largest = std::max(largest, std::abs(eig(i)));
    return largest > 0.0 ? 1.0 / largest : std::numeric_limits<double>::infinity();
}

}  // namespace vaxcast::arima
