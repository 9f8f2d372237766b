#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace daybt {

// Calendar date. Comparison is chronological; serial() is a day count
// suitable for differences (proleptic Gregorian, epoch 1970-01-01).
struct Date {
    int year = 0;
    int month = 0; // 1..12
    int day = 0;   // 1..31

    auto operator<=>(const Date&) const = default;

    // days since 1970-01-01 (negative before)
    std::int64_t serial() const;

    std::string iso() const; // YYYY-MM-DD
};

// Parses strict ISO-8601 (YYYY-MM-DD). Throws DataError on malformed input
// or an impossible calendar date.
Date parse_date(const std::string& text);

// Inverse of Date::serial().
Date date_from_serial(std::int64_t days);

bool is_valid_date(int year, int month, int day);

// (year, month) key for monthly grouping.
struct YearMonth {
    int year = 0;
    int month = 0;

    auto operator<=>(const YearMonth&) const = default;
};

inline YearMonth year_month(const Date& d) { return {d.year, d.month}; }

} // namespace daybt
