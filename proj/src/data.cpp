#include "daybt/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "daybt/errors.hpp"

namespace daybt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_price(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " value '" + s + "'");
    }
}

std::uint64_t parse_volume(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad volume value '" + s + "'");
    }
}

std::string fmt_price(double v) {
    char buf[32]; // shortest representation that parses back exactly
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

double daytime_return(const Bar& bar) { return (bar.close - bar.open) / bar.open; }

void validate_bar(const Bar& bar) {
    const std::string at = " on " + bar.date.iso();
    if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0))
        throw DataError("nonpositive price" + at);
    if (bar.low > bar.high) throw DataError("low > high" + at);
    if (bar.low > std::min(bar.open, bar.close) || bar.high < std::max(bar.open, bar.close))
        throw DataError("OHLC inconsistency (open/close outside [low, high])" + at);
}

std::vector<Bar> parse_bar_csv(std::istream& in, bool has_volume) {
    std::vector<Bar> bars;
    std::string line;
    std::size_t line_no = 0;
    const std::size_t want = has_volume ? 6 : 5;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1) {
            // header row is required
            auto cols = split(line, ',');
            if (cols.empty() || cols[0] != "date")
                throw DataError("line 1: expected header starting with 'date', got '" + line + "'");
            continue;
        }
        auto cols = split(line, ',');
        if (cols.size() != want)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(want) + " fields, got " + std::to_string(cols.size()));
        Bar bar;
        try {
            bar.date = parse_date(cols[0]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        bar.open = parse_price(cols[1], line_no, "open");
        bar.high = parse_price(cols[2], line_no, "high");
        bar.low = parse_price(cols[3], line_no, "low");
        bar.close = parse_price(cols[4], line_no, "close");
        if (has_volume) bar.volume = parse_volume(cols[5], line_no);
        try {
            validate_bar(bar);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        bars.push_back(bar);
    }
    std::stable_sort(bars.begin(), bars.end(),
                     [](const Bar& a, const Bar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i)
        if (bars[i].date == bars[i - 1].date)
            throw DataError("duplicate date " + bars[i].date.iso());
    return bars;
}

std::vector<Bar> load_bar_csv(const std::string& path, bool has_volume) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return parse_bar_csv(in, has_volume);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<RatePoint> parse_rates_csv(std::istream& in) {
    std::vector<RatePoint> rates;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1) {
            auto cols = split(line, ',');
            if (cols.empty() || cols[0] != "date")
                throw DataError("line 1: expected header starting with 'date', got '" + line + "'");
            continue;
        }
        auto cols = split(line, ',');
        if (cols.size() != 2)
            throw DataError("line " + std::to_string(line_no) + ": expected 2 fields, got " +
                            std::to_string(cols.size()));
        RatePoint r;
        try {
            r.date = parse_date(cols[0]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.annual_yield = parse_price(cols[1], line_no, "yield") / 100.0;
        if (r.annual_yield < -0.01)
            throw DataError("line " + std::to_string(line_no) + ": annual yield " + cols[1] +
                            "% below -1% looks like a bad parse");
        rates.push_back(r);
    }
    std::stable_sort(rates.begin(), rates.end(),
                     [](const RatePoint& a, const RatePoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (rates[i].date == rates[i - 1].date)
            throw DataError("duplicate rate date " + rates[i].date.iso());
    return rates;
}

std::vector<RatePoint> load_rates_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return parse_rates_csv(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

Dataset align_sessions(const std::vector<Bar>& es, const std::vector<Bar>& vix,
                       const std::vector<RatePoint>& rates) {
    if (es.empty() || vix.empty() || rates.empty())
        throw DataError("align_sessions requires nonempty ES, VIX and rate series");

    // VIX lookup by exact date; missing sessions are an error, never filled.
    std::vector<Date> missing;
    std::size_t vi = 0;
    std::size_t ri = 0;
    Dataset ds;
    ds.days.reserve(es.size());
    for (std::size_t i = 1; i < es.size(); ++i) { // first ES day dropped: no prev volume
        const Bar& bar = es[i];
        while (vi < vix.size() && vix[vi].date < bar.date) ++vi;
        if (vi >= vix.size() || vix[vi].date != bar.date) {
            missing.push_back(bar.date);
            continue;
        }
        while (ri + 1 < rates.size() && rates[ri + 1].date <= bar.date) ++ri;
        if (rates[ri].date > bar.date)
            throw DataError("no risk-free rate on or before " + bar.date.iso());
        if (!es[i - 1].volume)
            throw DataError("ES bar " + es[i - 1].date.iso() + " lacks volume");
        TradingDay day;
        day.date = bar.date;
        day.es = bar;
        day.vix = vix[vi];
        day.rf_annual = rates[ri].annual_yield;
        day.daytime_return = daytime_return(bar);
        day.label = day.daytime_return > 0.0 ? +1 : -1;
        day.prev_volume = *es[i - 1].volume;
        ds.days.push_back(day);
    }
    if (!missing.empty()) {
        std::string msg = "ES dates with no VIX session:";
        for (const auto& d : missing) msg += " " + d.iso();
        throw DataError(msg);
    }
    return ds;
}

std::string bars_to_csv(const std::vector<Bar>& bars, bool has_volume) {
    std::string out = has_volume ? "date,open,high,low,close,volume\n" : "date,open,high,low,close\n";
    for (const Bar& b : bars) {
        out += b.date.iso();
        out += ',' + fmt_price(b.open) + ',' + fmt_price(b.high) + ',' + fmt_price(b.low) + ',' +
               fmt_price(b.close);
        if (has_volume) out += ',' + std::to_string(b.volume.value_or(0));
        out += '\n';
    }
    return out;
}

std::string rates_to_csv(const std::vector<RatePoint>& rates) {
    std::string out = "date,annual_yield_percent\n";
    for (const RatePoint& r : rates)
        out += r.date.iso() + ',' + fmt_price(r.annual_yield * 100.0) + '\n';
    return out;
}

} // namespace daybt
