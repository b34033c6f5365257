#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tth {

/// A calendar day, stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    constexpr std::int64_t days() const noexcept { return days_; }

    int year() const;
    unsigned month() const;
    unsigned day() const;

    /// Same day of month `months` later, clamped to the end of shorter months.
    Date add_months(int months) const;

    constexpr Date operator+(std::int64_t d) const noexcept { return Date(days_ + d); }
    constexpr Date operator-(std::int64_t d) const noexcept { return Date(days_ - d); }
    constexpr std::int64_t operator-(Date other) const noexcept { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

/// ISO-8601 "YYYY-MM-DD".
std::string format_date(Date date);

/// Strict ISO-8601 "YYYY-MM-DD"; throws Error{parse}.
Date parse_iso_date(std::string_view text);

/// Parses `text` under `format`, keeping date resolution.
///
/// Two format dialects are accepted. If the format contains '%', it is read as a
/// strftime subset (%Y %m %d %H %M %S %%). Otherwise the tokens YYYY, MM, DD, HH,
/// mm and SS are substituted (the "YYYY-MM-DD" annotation style). All other
/// characters must match literally and the whole input must be consumed.
Date parse_date(std::string_view text, std::string_view format);

}  // namespace tth
