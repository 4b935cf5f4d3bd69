#include "vaxcast/series/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "linalg/least_squares.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/simd/kernels.hpp"

namespace vaxcast::series {

namespace {

// MacKinnon (2010) response surface, constant only, one variable:
// cv(T) = b0 + b1/T + b2/T^2 + b3/T^3.
constexpr double kAdfConstantOnly[3][4] = {
    {-3.43035, -6.5393, -16.786, -79.433},  // 1%
    {-2.86154, -2.8903, -4.234, -40.040},   // 5%
    {-2.56677, -1.5384, -2.809, 0.0},       // 10%
};

std::vector<double> centered(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw DomainError("series is constant; autocorrelation undefined");
    const double mean = simd::sum(values) / static_cast<double>(values.size());
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v -= mean;
    return out;
}

}  // namespace

std::vector<double> acf(std::span<const double> values, std::size_t max_lag) {
    if (max_lag == 0) throw DomainError("acf: max_lag must be positive");
    if (values.size() <= max_lag) throw DomainError("acf: series length must exceed max_lag");
    const auto x = centered(values);
    const std::span<const double> xs{x};
    const double c0 = simd::dot(xs, xs);
    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        out[k] = simd::dot(xs.subspan(k), xs.first(x.size() - k)) / c0;
    }
    return out;
}

std::vector<double> acf(const DatedSeries& series, std::size_t max_lag) {
    return acf(series.values(), max_lag);
}

std::vector<double> pacf(std::span<const double> values, std::size_t max_lag) {
    if (max_lag == 0) throw DomainError("pacf: max_lag must be positive");
    if (values.size() <= max_lag + 1) throw DomainError("pacf: series length must exceed max_lag + 1");
    const auto rho = acf(values, max_lag);

    std::vector<double> out(max_lag);
    std::vector<double> phi, prev;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double kk;
        if (k == 1) {
            kk = rho[1];
        } else {
            double num = rho[k], den = 1.0;
            for (std::size_t j = 1; j < k; ++j) {
                num -= prev[j - 1] * rho[k - j];
                den -= prev[j - 1] * rho[j];
            }
            kk = num / den;
        }
        phi.assign(k, 0.0);
        for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kk * prev[k - j - 1];
        phi[k - 1] = kk;
        out[k - 1] = kk;
        prev.swap(phi);
    }
    return out;
}

std::vector<double> pacf(const DatedSeries& series, std::size_t max_lag) {
    return pacf(series.values(), max_lag);
}

double significance_band(std::size_t n) { return 1.96 / std::sqrt(static_cast<double>(n)); }

std::string_view to_string(Significance level) {
    switch (level) {
        case Significance::one_percent: return "1%";
        case Significance::five_percent: return "5%";
        case Significance::ten_percent: break;
    }
    return "10%";
}

std::array<double, 3> adf_critical_values(std::size_t n_obs) {
    const double t = static_cast<double>(n_obs);
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& b = kAdfConstantOnly[i];
        out[i] = b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
    }
    return out;
}

DiagnosticReport adf_test(std::span<const double> values, std::size_t lag_order, Significance level) {
    const std::size_t n = values.size();
    if (n <= lag_order + 2) throw DomainError("adf_test: series too short for the lag order");
    const std::size_t rows = n - 1 - lag_order;
    const std::size_t cols = 2 + lag_order;
    if (rows <= cols) throw DomainError("adf_test: no residual degrees of freedom");

    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + 1 + lag_order;
        y(r) = values[t] - values[t - 1];
        x(r, 0) = 1.0;
        x(r, 1) = values[t - 1];
        for (std::size_t j = 1; j <= lag_order; ++j) x(r, 1 + j) = values[t - j] - values[t - j - 1];
    }
    std::vector<std::string> names{"const", "level_lag1"};
    for (std::size_t j = 1; j <= lag_order; ++j) names.push_back("diff_lag" + std::to_string(j));

    const auto fit = linalg::least_squares(x, y, names, true);
    const double s2 = fit.rss / static_cast<double>(rows - cols);
    const double se = std::sqrt(s2 * fit.xtx_inverse(1, 1));
    if (!(se > 0.0)) throw DomainError("adf_test: regression fits exactly; statistic undefined");

    DiagnosticReport report;
    report.statistic = fit.coef(1) / se;
    report.critical_values = adf_critical_values(rows);
    report.level = level;
    report.reject_unit_root = report.statistic < report.critical_value(level);
    report.lag_order = lag_order;
    report.n_obs = rows;
    return report;
}

DiagnosticReport adf_test(const DatedSeries& series, std::size_t lag_order, Significance level) {
    return adf_test(series.values(), lag_order, level);
}

double kendall_tau(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("kendall_tau: need at least two values");
    long long score = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            score += (values[j] > values[i]) - (values[j] < values[i]);
        }
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    long long tied_pairs = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<long long>(j - i);
        tied_pairs += t * (t - 1) / 2;
        i = j;
    }
    const auto pairs = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
    if (tied_pairs == pairs) throw DomainError("kendall_tau: all values tied");
    return static_cast<double>(score) /
           std::sqrt(static_cast<double>(pairs) * static_cast<double>(pairs - tied_pairs));
}

double kendall_tau(const DatedSeries& series) { return kendall_tau(series.values()); }

std::string_view to_string(TrendLabel label) {
    switch (label) {
        case TrendLabel::rising: return "Rising";
        case TrendLabel::falling: return "Falling";
        case TrendLabel::steady: break;
    }
    return "Steady";
}

TrendLabel label_for_tau(double tau, double steady_threshold) {
    if (tau > steady_threshold) return TrendLabel::rising;
    if (tau < -steady_threshold) return TrendLabel::falling;
    return TrendLabel::steady;
}

TrendReport segment_trend(const DatedSeries& series, std::span<const Date> breakpoints,
                          double steady_threshold) {
    std::vector<Date> starts{series.start_date()};
    for (const Date b : breakpoints) {
        if (b <= starts.back()) {
            throw DomainError("segment_trend: empty segment before breakpoint " + b.iso());
        }
        if (b > series.end_date()) {
            throw DomainError("segment_trend: breakpoint " + b.iso() + " after the last date");
        }
        starts.push_back(b);
    }

    TrendReport report;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const Date first = starts[s];
        const Date last = s + 1 < starts.size() ? starts[s + 1] - 1 : series.end_date();
        if (last - first < 1) {
            throw DomainError("segment_trend: segment " + first.iso() + ".." + last.iso() +
                              " has fewer than two days");
        }
        const auto seg = series.between(first, last);
        const double tau = kendall_tau(seg);
        report.segments.push_back({first, last, tau, label_for_tau(tau, steady_threshold)});
    }
    return report;
}

}  // namespace vaxcast::series
