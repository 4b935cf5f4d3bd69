#include "vaxcast/dated_series.hpp"

#include <cmath>

#include "vaxcast/error.hpp"

namespace vaxcast {

DatedSeries::DatedSeries(Date start, std::vector<double> values, std::string name)
    : start_(start), values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty()) throw DomainError("series '" + name_ + "' is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("series '" + name_ + "' has a non-finite value on " +
                              date_at(i).iso());
        }
    }
}

std::optional<std::size_t> DatedSeries::index_of(Date d) const noexcept {
    if (!contains(d)) return std::nullopt;
    return static_cast<std::size_t>(d - start_);
}

double DatedSeries::at(Date d) const {
    const auto i = index_of(d);
    if (!i) throw DomainError("series '" + name_ + "' has no value on " + d.iso());
    return values_[*i];
}

DatedSeries DatedSeries::slice(std::size_t offset, std::size_t count) const {
    if (count == 0 || offset + count > values_.size()) {
        throw DomainError("slice [" + std::to_string(offset) + ", +" + std::to_string(count) +
                          ") outside series '" + name_ + "' of length " +
                          std::to_string(values_.size()));
    }
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(offset);
    return DatedSeries(date_at(offset), std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count)),
                       name_);
}

DatedSeries DatedSeries::between(Date first, Date last) const {
    if (last < first || !contains(first) || !contains(last)) {
        throw DomainError("range " + first.iso() + ".." + last.iso() + " not covered by series '" +
                          name_ + "'");
    }
    return slice(static_cast<std::size_t>(first - start_), static_cast<std::size_t>(last - first + 1));
}

void require_same_dates(const DatedSeries& a, const DatedSeries& b, const char* what) {
    if (!a.same_dates(b)) {
        throw DomainError(std::string(what) + ": date mismatch between '" + a.name() + "' (" +
                          a.start_date().iso() + ".." + a.end_date().iso() + ") and '" + b.name() +
                          "' (" + b.start_date().iso() + ".." + b.end_date().iso() + ")");
    }
}

}  // namespace vaxcast
