#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "daybt/data.hpp"
#include "daybt/rng.hpp"

namespace daybt::testing {

inline Date next_weekday(Date d) {
    std::int64_t s = d.serial() + 1;
    while ((s + 4) % 7 == 5 || (s + 4) % 7 == 6) ++s; // 1970-01-01 was a Thursday
    return date_from_serial(s);
}

struct SyntheticSeries {
    std::vector<Bar> es;
    std::vector<Bar> vix;
    std::vector<RatePoint> rates;
};

// Geometric random walk with intraday (open->close) legs; VIX mean-reverts
// around 20; quarterly rate points.
inline SyntheticSeries make_synthetic_series(std::size_t n_days, std::uint64_t seed,
                                             double drift = 0.0, double vol = 0.01) {
    Rng rng(seed);
    SyntheticSeries out;
    Date date{2018, 1, 2};
    double es_close = 2700.0;
    double vix_close = 20.0;
    for (std::size_t i = 0; i < n_days; ++i) {
        Bar es;
        es.date = date;
        es.open = es_close * std::exp(0.3 * vol * rng.normal());
        es.close = es.open * std::exp(drift + vol * rng.normal());
        const double up = std::abs(0.4 * vol * rng.normal());
        const double dn = std::abs(0.4 * vol * rng.normal());
        es.high = std::max(es.open, es.close) * std::exp(up);
        es.low = std::min(es.open, es.close) * std::exp(-dn);
        es.volume = 1000000 + rng.next_below(800000);
        es_close = es.close;
        out.es.push_back(es);

        Bar vix;
        vix.date = date;
        vix.open = vix_close * std::exp(0.05 * rng.normal());
        vix.close = (vix.open + 0.02 * (20.0 - vix.open)) * std::exp(0.05 * rng.normal());
        vix.high = std::max(vix.open, vix.close) * std::exp(std::abs(0.02 * rng.normal()));
        vix.low = std::min(vix.open, vix.close) * std::exp(-std::abs(0.02 * rng.normal()));
        vix_close = vix.close;
        out.vix.push_back(vix);

        if (i % 63 == 0)
            out.rates.push_back({date, 0.01 + 0.03 * rng.next_double()});
        date = next_weekday(date);
    }
    return out;
}

inline Dataset make_synthetic_dataset(std::size_t n_days, std::uint64_t seed, double drift = 0.0,
                                      double vol = 0.01) {
    // +1 raw day: alignment drops the first ES day
    const auto series = make_synthetic_series(n_days + 1, seed, drift, vol);
    return align_sessions(series.es, series.vix, series.rates);
}

#ifdef DAYBT_TEST_DATA_DIR
inline std::string test_data_dir() { return DAYBT_TEST_DATA_DIR; }
#endif

} // namespace daybt::testing
