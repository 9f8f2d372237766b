#pragma once

#include <string>
#include <vector>

#include "daybt/backtest.hpp"
#include "daybt/metrics.hpp"

namespace daybt {

struct NamedCurve {
    std::string name;
    std::vector<EquityPoint> points;
};

// Self-contained line chart of one or more equity curves.
std::string svg_equity_chart(const std::string& title, const std::vector<NamedCurve>& curves);

// Self-contained bar chart of a return histogram.
std::string svg_histogram_chart(const std::string& title, const std::vector<HistogramBin>& bins,
                                double bin_width);

} // namespace daybt
