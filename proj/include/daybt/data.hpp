#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "daybt/date.hpp"

namespace daybt {

// One instrument-day of OHLC(V). Volume is absent for the volatility index.
struct Bar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::optional<std::uint64_t> volume;

    bool operator==(const Bar&) const = default;
};

// One observation of an annualized risk-free yield (fraction, e.g. 0.0525).
struct RatePoint {
    Date date;
    double annual_yield = 0.0;

    bool operator==(const RatePoint&) const = default;
};

// One calendar-aligned session: futures bar, volatility bar, risk-free rate
// in effect, the session's open-to-close return, its sign label, and the
// futures volume of the previous session.
struct TradingDay {
    Date date;
    Bar es;
    Bar vix;
    double rf_annual = 0.0;
    double daytime_return = 0.0;
    int label = 0; // +1 if daytime_return > 0, else -1
    std::uint64_t prev_volume = 0;

    bool operator==(const TradingDay&) const = default;
};

struct Dataset {
    std::vector<TradingDay> days; // strictly increasing by date
    std::string es_path;
    std::string vix_path;
    std::string rates_path;

    std::size_t size() const { return days.size(); }
    bool empty() const { return days.empty(); }
    const TradingDay& operator[](std::size_t i) const { return days[i]; }
};

// (close - open) / open
double daytime_return(const Bar& bar);

// Throws DataError if OHLC relations are violated (reports the date).
void validate_bar(const Bar& bar);

// Parses `date,open,high,low,close[,volume]` rows. Rows are returned sorted
// ascending by date; Bar invariants are enforced; duplicate dates and
// malformed rows are errors carrying the 1-based line number.
std::vector<Bar> parse_bar_csv(std::istream& in, bool has_volume);
std::vector<Bar> load_bar_csv(const std::string& path, bool has_volume);

// Parses `date,annual_yield_percent` rows (percent converted to fraction).
std::vector<RatePoint> parse_rates_csv(std::istream& in);
std::vector<RatePoint> load_rates_csv(const std::string& path);

// Builds one TradingDay per ES date: VIX matched by equal date (missing
// dates are a hard error), the risk-free rate matched by the most recent
// observation on or before the date, and the first ES day dropped because it
// has no previous-day volume.
Dataset align_sessions(const std::vector<Bar>& es, const std::vector<Bar>& vix,
                       const std::vector<RatePoint>& rates);

// CSV serialization that round-trips exactly through the parsers above.
std::string bars_to_csv(const std::vector<Bar>& bars, bool has_volume);
std::string rates_to_csv(const std::vector<RatePoint>& rates);

// Splits a dataset back into its three source series (ES including the
// dropped first day is not recoverable; the emitted ES series round-trips
// the retained days plus the synthetic day needed for prev_volume).
struct DatasetCsv {
    std::string es;
    std::string vix;
    std::string rates;
};

} // namespace daybt
