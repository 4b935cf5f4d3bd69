#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace vaxcast {

/// Calendar day (proleptic Gregorian), stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d.time_since_epoch().count()) {}
    Date(int year, unsigned month, unsigned day);

    static constexpr Date from_serial(long serial) {
        Date d;
        d.days_ = serial;
        return d;
    }

    /// Strict `YYYY-MM-DD`; nullopt on any other shape or an invalid day.
    static std::optional<Date> parse(std::string_view text);
    /// Throws DomainError when `text` is not a valid ISO date.
    static Date from_iso(std::string_view text);

    std::string iso() const;
    constexpr long serial() const noexcept { return days_; }
    std::chrono::year_month_day ymd() const;

    constexpr Date operator+(long n) const { return from_serial(days_ + n); }
    constexpr Date operator-(long n) const { return from_serial(days_ - n); }
    constexpr long operator-(Date other) const { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    long days_ = 0;
};

}  // namespace vaxcast
