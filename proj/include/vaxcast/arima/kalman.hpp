#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vaxcast::arima {

/// Exact Gaussian likelihood of a zero-mean-plus-constant ARMA(p, q) process,
/// evaluated by a Kalman filter on the Harvey state-space form
///
///   x_t = m + Z a_t,   a_{t+1} = T a_t + R e_t,   Z = (1, 0, ..., 0),
///
/// with state dimension r = max(p, q + 1), T carrying phi in its first
/// column and an identity superdiagonal, R = (1, theta_1, ..., theta_{r-1}).
/// The initial state covariance is the stationary solution of
/// P = T P T' + R R'. The constant m and the innovation variance are
/// concentrated out (GLS mean, ML variance).
///
/// Instances keep scratch buffers and are not thread-safe; use one per thread.
class ArmaLikelihood {
public:
    struct Result {
        double neg_log_likelihood = 0.0;
        double mean = 0.0;
        double sigma2 = 0.0;
        /// One-step prediction errors x_t - E[x_t | x_1..x_{t-1}] (when requested).
        std::vector<double> innovations;
        /// Their scaled variances F_t (prediction variance / sigma2).
        std::vector<double> variances;
    };

    ArmaLikelihood(std::span<const double> data, std::size_t p, std::size_t q);

    std::size_t state_dim() const noexcept { return r_; }

    /// False when the filter broke down (non-positive prediction variance or a
    /// non-stationary phi that keeps the initial covariance from converging).
    bool evaluate(std::span<const double> phi, std::span<const double> theta, Result& out,
                  bool keep_innovations);

    /// Stationary covariance P with P = T P T' + R R' (row-major r x r).
    static bool stationary_covariance(std::span<const double> phi, std::span<const double> theta,
                                      std::size_t r, std::vector<double>& p_out);

private:
    std::vector<double> data_;
    std::size_t p_, q_, r_;
    std::vector<double> phi_, rvec_, a_, b_, m_, pmat_, xmat_, vz_, v1_, f_;
};

}  // namespace vaxcast::arima
