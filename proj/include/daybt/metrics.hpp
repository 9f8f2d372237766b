#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "daybt/date.hpp"
#include "daybt/decision.hpp"

namespace daybt {

struct DatedReturn {
    Date date;
    double value = 0.0;
};

using ReturnSeries = std::vector<DatedReturn>;

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

struct ClassificationRates {
    double accuracy = 0.0;
    std::optional<double> ppv; // absent when no positive predictions
    std::optional<double> npv; // absent when no negative predictions
};

struct SummaryStats {
    double mean = 0.0;
    double std_dev = 0.0; // population (divide by N)
    double min = 0.0;
    double max = 0.0;
    std::optional<double> skew;     // population third standardized moment
    std::optional<double> kurtosis; // Pearson (non-excess): normal = 3
};

struct MonthlyReturn {
    YearMonth month;
    double value = 0.0;
};

using MonthlyReturns = std::vector<MonthlyReturn>;

struct Annualized {
    double annualized_return = 0.0;
    double annualized_vol = 0.0; // sample std of monthly returns * sqrt(12)
};

struct CapmFit {
    double alpha_annualized = 0.0; // monthly OLS intercept * 12
    double beta = 0.0;
};

struct RiskRatios {
    std::optional<double> sharpe;
    std::optional<double> sortino;
    std::optional<double> information_ratio;
};

struct DrawdownStats {
    double max_drawdown = 0.0; // <= 0
    std::optional<double> calmar;
};

struct MonthWinLoss {
    double avg_return = 0.0;
    std::optional<double> avg_gain; // over r > 0 months
    std::optional<double> avg_loss; // over r < 0 months
    double pct_winning = 0.0;       // r > 0
    double pct_losing = 0.0;        // r <= 0 (flat months count as losing)
};

struct ExposureStats {
    double pct_long_days = 0.0;
    double pct_short_days = 0.0;
    std::optional<double> long_contribution;  // share of simple-sum profit
    std::optional<double> short_contribution; // absent when total profit is 0
};

struct HistogramBin {
    double lower_edge = 0.0;
    std::uint64_t count = 0;
};

// Full monthly-metrics bundle for one strategy against a benchmark.
struct PerfReport {
    Annualized ann;
    CapmFit capm;
    RiskRatios ratios;
    DrawdownStats drawdown;
    MonthWinLoss months;
};

// ---- classification ----

// predictions: +1 / -1 per day, 0 = abstained (excluded from all counts).
ConfusionCounts confusion_counts(const std::vector<int>& predictions,
                                 const std::vector<int>& labels);

ClassificationRates classification_rates(const ConfusionCounts& c);

// ---- return distributions ----

SummaryStats summary_stats(const std::vector<double>& values);

// Compounds a dated daily series into calendar months: prod(1+r) - 1.
MonthlyReturns compound_monthly(const ReturnSeries& daily);

Annualized annualize(const MonthlyReturns& monthly);

// OLS of (model - rf) on (benchmark - rf), index-aligned series.
CapmFit capm(const MonthlyReturns& model, const MonthlyReturns& benchmark,
             const std::vector<double>& rf_monthly);

// sharpe = (ann return - compounded ann rf) / ann vol
// sortino replaces the denominator with annualized downside deviation
//   sqrt(mean(min(r - rf, 0)^2)) * sqrt(12)
// information ratio = mean monthly excess * 12 / (sample std of excess * sqrt(12))
RiskRatios risk_ratios(const MonthlyReturns& monthly, const std::vector<double>& rf_monthly,
                       const MonthlyReturns& benchmark);

// Peak-tracking drawdown on the monthly compounded equity curve; the running
// peak is seeded with the starting capital of 1.
DrawdownStats drawdown_calmar(const MonthlyReturns& monthly);

MonthWinLoss month_win_loss(const MonthlyReturns& monthly);

ExposureStats exposure_stats(const std::vector<Decision>& decisions,
                             const std::vector<double>& daily_strategy_returns);

// Bins centered on 0 (bin k spans [(k-1/2)w, (k+1/2)w)); empty bins between
// the extremes are emitted with count 0.
std::vector<HistogramBin> histogram(const std::vector<double>& values, double bin_width);

// ---- composition helpers ----

struct RatePoint; // data.hpp

// Maps each month to the risk-free rate in effect (latest observation dated
// on or before the month's last day), divided by 12.
std::vector<double> monthly_rf(const std::vector<YearMonth>& months,
                               const std::vector<RatePoint>& rates);

// Requires identical month sets in model and benchmark (throws otherwise).
PerfReport build_perf_report(const MonthlyReturns& model, const MonthlyReturns& benchmark,
                             const std::vector<double>& rf_monthly);

} // namespace daybt
