#include "vaxcast/arima/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::arima {

namespace {

constexpr double kSteadyTolerance = 1e-13;

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// out = a * b' where rows of b are read as columns (b symmetric or pre-transposed).
void multiply_rows(std::span<const double> a, std::span<const double> b, std::size_t r,
                   std::span<double> out) {
    for (std::size_t i = 0; i < r; ++i) {
        const auto row = a.subspan(i * r, r);
        for (std::size_t j = 0; j < r; ++j) out[i * r + j] = simd::dot(row, b.subspan(j * r, r));
    }
}

}  // namespace

ArmaLikelihood::ArmaLikelihood(std::span<const double> data, std::size_t p, std::size_t q)
    : data_(data.begin(), data.end()), p_(p), q_(q), r_(std::max(p, q + 1)) {
    phi_.resize(r_);
    rvec_.resize(r_);
    a_.resize(r_ + 1);
    b_.resize(r_ + 1);
    m_.resize(r_);
    pmat_.resize(r_ * r_);
    xmat_.resize(r_ * r_);
    vz_.resize(data_.size());
    v1_.resize(data_.size());
    f_.resize(data_.size());
}

bool ArmaLikelihood::stationary_covariance(std::span<const double> phi, std::span<const double> theta,
                                           std::size_t r, std::vector<double>& p_out) {
    std::vector<double> rv(r, 0.0), a(r * r, 0.0), at(r * r), w(r * r), next(r * r);
    rv[0] = 1.0;
    for (std::size_t k = 0; k < theta.size() && k + 1 < r; ++k) rv[k + 1] = theta[k];
    for (std::size_t i = 0; i < r; ++i) {
        if (i < phi.size()) a[i * r] = phi[i];
        if (i + 1 < r) a[i * r + i + 1] = 1.0;
    }
    p_out.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) p_out[i * r + j] = rv[i] * rv[j];
    }

    // Doubling: P <- P + A P A', A <- A^2 sums T^j R R' T'^j over j < 2^k.
    for (int iter = 0; iter < 64; ++iter) {
        multiply_rows(a, p_out, r, w);   // A P   (P symmetric)
        multiply_rows(w, a, r, next);    // A P A'
        double change = 0.0;
        for (std::size_t i = 0; i < r * r; ++i) {
            p_out[i] += next[i];
            change = std::max(change, std::abs(next[i]));
        }
        const double scale = max_abs(p_out);
        if (!std::isfinite(scale) || scale > 1e12) return false;
        if (change <= 1e-16 * scale) return true;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) at[j * r + i] = a[i * r + j];
        }
        multiply_rows(a, at, r, w);      // A A
        a.swap(w);
    }
    return false;
}

bool ArmaLikelihood::evaluate(std::span<const double> phi, std::span<const double> theta, Result& out,
                              bool keep_innovations) {
    const std::size_t r = r_, n = data_.size();
    std::fill(phi_.begin(), phi_.end(), 0.0);
    std::copy(phi.begin(), phi.end(), phi_.begin());
    std::fill(rvec_.begin(), rvec_.end(), 0.0);
    rvec_[0] = 1.0;
    std::copy(theta.begin(), theta.end(), rvec_.begin() + 1);

    if (!stationary_covariance(phi, theta, r, pmat_)) return false;
    std::fill(a_.begin(), a_.end(), 0.0);
    std::fill(b_.begin(), b_.end(), 0.0);

    double sum_log_f = 0.0;
    const std::span<const double> rspan{rvec_}, phispan{phi_};
    std::size_t t = 0;
    for (; t < n; ++t) {
        const double f = pmat_[0];
        if (!(f > 0.0) || !std::isfinite(f)) return false;
        const double vz = data_[t] - a_[0];
        const double v1 = 1.0 - b_[0];
        vz_[t] = vz;
        v1_[t] = v1;
        f_[t] = f;
        sum_log_f += std::log(f);

        // measurement update
        std::copy(pmat_.begin(), pmat_.begin() + static_cast<std::ptrdiff_t>(r), m_.begin());
        const std::span<const double> mspan{m_};
        simd::axpy(vz / f, mspan, std::span<double>(a_.data(), r));
        simd::axpy(v1 / f, mspan, std::span<double>(b_.data(), r));
        for (std::size_t i = 0; i < r; ++i) {
            simd::axpy(-m_[i] / f, mspan, std::span<double>(pmat_.data() + i * r, r));
        }

        // time update: a <- T a, P <- T P T' + R R'
        const double a0 = a_[0], b0 = b_[0];
        for (std::size_t i = 0; i < r; ++i) {
            a_[i] = phi_[i] * a0 + a_[i + 1];
            b_[i] = phi_[i] * b0 + b_[i + 1];
        }
        for (std::size_t i = 0; i < r; ++i) {
            double* xrow = xmat_.data() + i * r;
            if (i + 1 < r) {
                std::copy_n(pmat_.data() + (i + 1) * r, r, xrow);
            } else {
                std::fill_n(xrow, r, 0.0);
            }
            simd::axpy(phi_[i], std::span<const double>(pmat_.data(), r), std::span<double>(xrow, r));
        }
        for (std::size_t i = 0; i < r; ++i) {
            const double* xrow = xmat_.data() + i * r;
            double* prow = pmat_.data() + i * r;
            std::copy_n(xrow + 1, r - 1, prow);
            prow[r - 1] = 0.0;
            simd::axpy(xrow[0], phispan, std::span<double>(prow, r));
            simd::axpy(rvec_[i], rspan, std::span<double>(prow, r));
        }

        // Invertible MA: P converges to R R' and the gain to R; after that the
        // covariance recursion is a fixed point and can be skipped.
        double gap = 0.0;
        for (std::size_t i = 0; i < r && gap <= kSteadyTolerance; ++i) {
            for (std::size_t j = 0; j < r; ++j) gap = std::max(gap, std::abs(pmat_[i * r + j] - rvec_[i] * rvec_[j]));
        }
        if (gap <= kSteadyTolerance) {
            ++t;
            break;
        }
    }
    for (; t < n; ++t) {
        const double vz = data_[t] - a_[0];
        const double v1 = 1.0 - b_[0];
        vz_[t] = vz;
        v1_[t] = v1;
        f_[t] = 1.0;
        simd::axpy(vz, rspan, std::span<double>(a_.data(), r));
        simd::axpy(v1, rspan, std::span<double>(b_.data(), r));
        const double a0 = a_[0], b0 = b_[0];
        for (std::size_t i = 0; i < r; ++i) {
            a_[i] = phi_[i] * a0 + a_[i + 1];
            b_[i] = phi_[i] * b0 + b_[i + 1];
        }
    }

    double szz = 0.0, s11 = 0.0, sz1 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        szz += vz_[t] * vz_[t] / f_[t];
        s11 += v1_[t] * v1_[t] / f_[t];
        sz1 += vz_[t] * v1_[t] / f_[t];
    }
    if (!(s11 > 0.0)) return false;
    const double mean = sz1 / s11;
    const double rss = std::max(szz - sz1 * mean, 0.0);
    const double sigma2 = rss / static_cast<double>(n);
    if (!(sigma2 > 0.0)) return false;

    const double dn = static_cast<double>(n);
    out.neg_log_likelihood =
        0.5 * dn * (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(sigma2)) + 0.5 * sum_log_f;
    out.mean = mean;
    out.sigma2 = sigma2;
    if (keep_innovations) {
        out.innovations.resize(n);
        out.variances.assign(f_.begin(), f_.end());
        for (std::size_t t = 0; t < n; ++t) out.innovations[t] = vz_[t] - mean * v1_[t];
    }
    return std::isfinite(out.neg_log_likelihood);
}

}  // namespace vaxcast::arima
