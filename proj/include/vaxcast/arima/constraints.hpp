#pragma once

// Maps between unconstrained reals and stationary AR / invertible MA
// coefficient vectors via partial autocorrelations (Jones/Monahan).

#include <optional>
#include <span>
#include <vector>

namespace vaxcast::arima {

/// Partial autocorrelations in (-1, 1) -> AR coefficients of 1 - phi_1 B - ... - phi_p B^p.
std::vector<double> pacf_to_ar(std::span<const double> partials);

/// Step-down recursion; nullopt unless every partial lies strictly inside (-1, 1),
/// i.e. unless the AR polynomial is stationary.
std::optional<std::vector<double>> ar_to_pacf(std::span<const double> ar);

/// Unconstrained -> stationary AR coefficients (partials are tanh(u)).
std::vector<double> constrain_ar(std::span<const double> free);
/// Unconstrained -> invertible MA coefficients of 1 + theta_1 B + ... + theta_q B^q.
std::vector<double> constrain_ma(std::span<const double> free);

std::optional<std::vector<double>> unconstrain_ar(std::span<const double> ar);
std::optional<std::vector<double>> unconstrain_ma(std::span<const double> ma);

/// Smallest root modulus of 1 - c_1 z - ... - c_k z^k (infinity when all c are 0).
double min_root_modulus(std::span<const double> coefficients);

}  // namespace vaxcast::arima
