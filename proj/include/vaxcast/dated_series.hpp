#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaxcast/date.hpp"

namespace vaxcast {

/// Dense daily series: value i belongs to `start_date() + i`.
///
/// Construction enforces the invariants (non-empty, every value finite), so a
/// DatedSeries in hand never has gaps or NaNs.
class DatedSeries {
public:
    DatedSeries(Date start, std::vector<double> values, std::string name = {});

    Date start_date() const noexcept { return start_; }
    Date end_date() const noexcept { return start_ + static_cast<long>(values_.size()) - 1; }
    Date date_at(std::size_t i) const noexcept { return start_ + static_cast<long>(i); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double back() const noexcept { return values_.back(); }

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    bool contains(Date d) const noexcept { return d >= start_ && d <= end_date(); }
    std::optional<std::size_t> index_of(Date d) const noexcept;
    /// Value on `d`; DomainError when outside the range.
    double at(Date d) const;

    /// `count` values starting at position `offset`.
    DatedSeries slice(std::size_t offset, std::size_t count) const;
    /// Inclusive date range; DomainError when not fully covered.
    DatedSeries between(Date first, Date last) const;

    bool same_dates(const DatedSeries& other) const noexcept {
        return start_ == other.start_ && values_.size() == other.values_.size();
    }

    friend bool operator==(const DatedSeries&, const DatedSeries&) = default;

private:
    Date start_;
    std::vector<double> values_;
    std::string name_;
};

/// Throws DomainError unless `a` and `b` cover identical dates.
void require_same_dates(const DatedSeries& a, const DatedSeries& b, const char* what);

}  // namespace vaxcast
