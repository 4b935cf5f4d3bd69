#pragma once

#include "vaxcast/dated_series.hpp"

namespace vaxcast::series {

/// How the temporary-resident share enlarges the base population.
enum class ResidentAdjustment {
    divide,    ///< eligible = base / (1 - share): share is a fraction of the eligible total
    multiply,  ///< eligible = base * (1 + share): share is relative to the base
};

struct PopulationParams {
    double base_population = 0.0;
    double temp_resident_share = 0.071;
    double cumulative_prior_doses = 0.0;
    ResidentAdjustment adjustment = ResidentAdjustment::divide;

    /// Throws DomainError unless base_population > 0, 0 <= share < 1, prior >= 0.
    void validate() const;
    double eligible() const;
};

/// Daily first doses -> vaccination-to-expectation ratio.
///
/// ratio(t) = doses(t) / (expected(t) / 100) with
/// expected(t) = eligible - prior - sum_{s<t} doses(s).
DatedSeries to_ratio(const DatedSeries& doses, const PopulationParams& params);

/// Inverse of to_ratio under the same parameters.
DatedSeries from_ratio(const DatedSeries& ratio, const PopulationParams& params);

}  // namespace vaxcast::series
