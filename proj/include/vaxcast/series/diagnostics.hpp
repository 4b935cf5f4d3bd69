#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::series {

// ---------------------------------------------------------------------------
// Autocorrelation
// ---------------------------------------------------------------------------

/// Sample ACF, lags 0..max_lag, biased (divide-by-n) autocovariances.
/// Requires size > max_lag; DomainError on a constant series.
std::vector<double> acf(std::span<const double> values, std::size_t max_lag);
std::vector<double> acf(const DatedSeries& series, std::size_t max_lag);

/// Sample PACF for lags 1..max_lag (element k-1 holds lag k), from the
/// Durbin-Levinson recursion on the ACF. Requires size > max_lag + 1.
std::vector<double> pacf(std::span<const double> values, std::size_t max_lag);
std::vector<double> pacf(const DatedSeries& series, std::size_t max_lag);

/// Half-width of the 95% white-noise band, 1.96 / sqrt(n).
double significance_band(std::size_t n);

// ---------------------------------------------------------------------------
// Augmented Dickey-Fuller (constant, no trend)
// ---------------------------------------------------------------------------

enum class Significance { one_percent, five_percent, ten_percent };

std::string_view to_string(Significance level);

struct DiagnosticReport {
    double statistic = 0.0;
    /// Indexed by Significance: 1%, 5%, 10%.
    std::array<double, 3> critical_values{};
    Significance level = Significance::five_percent;
    bool reject_unit_root = false;
    std::size_t lag_order = 0;
    std::size_t n_obs = 0;  ///< rows in the test regression

    double critical_value(Significance s) const { return critical_values[static_cast<std::size_t>(s)]; }
};

/// Response-surface critical values for the constant-only Dickey-Fuller
/// t-statistic with `n_obs` regression rows.
std::array<double, 3> adf_critical_values(std::size_t n_obs);

/// t-ratio of y_{t-1} in  dy_t = a + g*y_{t-1} + sum_{j<=lag} d_j*dy_{t-j} + e_t.
/// Requires size > lag_order + 2; DomainError when the regression is singular.
DiagnosticReport adf_test(std::span<const double> values, std::size_t lag_order = 0,
                          Significance level = Significance::five_percent);
DiagnosticReport adf_test(const DatedSeries& series, std::size_t lag_order = 0,
                          Significance level = Significance::five_percent);

// ---------------------------------------------------------------------------
// Kendall's tau and trend segmentation
// ---------------------------------------------------------------------------

/// tau-b between time index and value. DomainError when every value is tied.
double kendall_tau(std::span<const double> values);
double kendall_tau(const DatedSeries& series);

enum class TrendLabel { rising, steady, falling };

std::string_view to_string(TrendLabel label);

/// Rising if tau > threshold, Falling if tau < -threshold, otherwise Steady.
TrendLabel label_for_tau(double tau, double steady_threshold = 0.1);

struct TrendSegment {
    Date first;
    Date last;
    double tau = 0.0;
    TrendLabel label = TrendLabel::steady;
};

struct TrendReport {
    std::vector<TrendSegment> segments;
};

/// Each breakpoint opens a new segment on that date. Breakpoints must be
/// sorted, strictly after the first date and within the range; a segment
/// shorter than two days is rejected.
TrendReport segment_trend(const DatedSeries& series, std::span<const Date> breakpoints,
                          double steady_threshold = 0.1);

}  // namespace vaxcast::series
