#include "vaxcast/series/transform.hpp"

#include <cmath>

#include "vaxcast/error.hpp"

namespace vaxcast::series {

void PopulationParams::validate() const {
    if (!(base_population > 0.0) || !std::isfinite(base_population)) {
        throw DomainError("base_population must be positive");
    }
    if (!(temp_resident_share >= 0.0 && temp_resident_share < 1.0)) {
        throw DomainError("temp_resident_share must lie in [0, 1)");
    }
    if (!(cumulative_prior_doses >= 0.0) || !std::isfinite(cumulative_prior_doses)) {
        throw DomainError("cumulative_prior_doses must be non-negative");
    }
}

double PopulationParams::eligible() const {
    validate();
    return adjustment == ResidentAdjustment::divide ? base_population / (1.0 - temp_resident_share)
                                                    : base_population * (1.0 + temp_resident_share);
}

DatedSeries to_ratio(const DatedSeries& doses, const PopulationParams& params) {
    double expected = params.eligible() - params.cumulative_prior_doses;
    std::vector<double> out(doses.size());
    for (std::size_t t = 0; t < doses.size(); ++t) {
        if (doses[t] < 0.0) {
            throw DomainError("negative dose count on " + doses.date_at(t).iso());
        }
        if (!(expected > 0.0)) {
            throw DomainError("eligible population exhausted on " + doses.date_at(t).iso());
        }
        out[t] = doses[t] / (expected / 100.0);
        expected -= doses[t];
    }
    return DatedSeries(doses.start_date(), std::move(out), "ratio");
}

DatedSeries from_ratio(const DatedSeries& ratio, const PopulationParams& params) {
    double expected = params.eligible() - params.cumulative_prior_doses;
    std::vector<double> out(ratio.size());
    for (std::size_t t = 0; t < ratio.size(); ++t) {
        if (!(expected > 0.0)) {
            throw DomainError("eligible population exhausted on " + ratio.date_at(t).iso());
        }
        out[t] = ratio[t] * (expected / 100.0);
        expected -= out[t];
    }
    return DatedSeries(ratio.start_date(), std::move(out), "first_doses");
}

}  // namespace vaxcast::series
