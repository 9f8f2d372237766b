#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daybt/backtest.hpp"
#include "daybt/metrics.hpp"

namespace daybt {

// Everything reportable about one strategy column.
struct StrategyColumn {
    std::string name;
    std::optional<ClassificationRates> classification;
    std::optional<SummaryStats> daily;
    std::optional<PerfReport> perf;
    std::optional<ExposureStats> exposure;
};

// Markdown report with the five table-shaped sections (sections with no
// data in any column are omitted).
std::string format_markdown_report(const std::string& title,
                                   const std::vector<StrategyColumn>& columns);

// Flat CSV: header of metric keys, one row per column (first field = name).
std::string format_report_csv(const std::vector<StrategyColumn>& columns);
std::vector<StrategyColumn> parse_report_csv(const std::string& text);

// monthly.csv: year,month,return_percent
std::string format_monthly_csv(const MonthlyReturns& monthly);
MonthlyReturns read_monthly_csv(const std::string& path);

// signals.csv: date,direction,scale,strategy_return
std::string format_signals_csv(const SignalSeries& series);
SignalSeries read_signals_csv(const std::string& path);

// equity.csv: date,value
std::string format_equity_csv(const std::vector<EquityPoint>& curve);
std::vector<EquityPoint> read_equity_csv(const std::string& path);

// hist.csv: bin_lower_edge,count
std::string format_hist_csv(const std::vector<HistogramBin>& bins);
std::vector<HistogramBin> read_hist_csv(const std::string& path);

// value formatting shared by report.md and compare.md ("-" for absent)
std::string fmt_pct(const std::optional<double>& fraction);  // 0.0309 -> "3.09%"
std::string fmt_plain(const std::optional<double>& value);   // 1.1616 -> "1.16"

} // namespace daybt
