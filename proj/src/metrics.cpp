#include "daybt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "daybt/data.hpp"
#include "daybt/errors.hpp"

namespace daybt {

namespace {

bool all_equal(const std::vector<double>& v) {
    for (double x : v)
        if (x != v[0]) return false;
    return true;
}

double sample_std(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (all_equal(v)) return 0.0; // exact, despite accumulation noise
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

constexpr double kSqrt12 = 3.4641016151377544;

} // namespace

ConfusionCounts confusion_counts(const std::vector<int>& predictions,
                                 const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw DataError("confusion_counts: series length mismatch (" +
                        std::to_string(predictions.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == 0) continue; // abstained
        const bool pred_pos = predictions[i] > 0;
        const bool label_pos = labels[i] > 0;
        if (pred_pos && label_pos) ++c.tp;
        else if (pred_pos && !label_pos) ++c.fp;
        else if (!pred_pos && !label_pos) ++c.tn;
        else ++c.fn;
    }
    return c;
}

ClassificationRates classification_rates(const ConfusionCounts& c) {
    const std::uint64_t total = c.total();
    if (total == 0) throw DataError("classification_rates: no scored days");
    ClassificationRates r;
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
    if (c.tp + c.fp > 0) r.ppv = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tn + c.fn > 0) r.npv = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fn);
    return r;
}

SummaryStats summary_stats(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) throw DataError("summary_stats: need at least 2 observations");
    SummaryStats s;
    s.min = values[0];
    s.max = values[0];
    double sum = 0.0;
    for (double x : values) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(n);
    if (s.min == s.max) { // constant series: exactly zero variance
        s.std_dev = 0.0;
        return s;
    }
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : values) {
        const double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    s.std_dev = std::sqrt(m2);
    if (m2 > 0.0) {
        s.skew = m3 / (m2 * s.std_dev);
        s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

MonthlyReturns compound_monthly(const ReturnSeries& daily) {
    MonthlyReturns out;
    for (const auto& [date, r] : daily) {
        const YearMonth ym = year_month(date);
        if (out.empty() || out.back().month != ym) {
            if (!out.empty() && !(out.back().month < ym))
                throw DataError("compound_monthly: daily returns not in date order");
            out.push_back({ym, 0.0});
        }
        out.back().value = (1.0 + out.back().value) * (1.0 + r) - 1.0;
    }
    return out;
}

Annualized annualize(const MonthlyReturns& monthly) {
    const std::size_t n = monthly.size();
    if (n < 2) throw DataError("annualize: need at least 2 months");
    double growth = 1.0;
    std::vector<double> values;
    values.reserve(n);
    for (const auto& m : monthly) {
        if (m.value <= -1.0)
            throw DataError("annualize: monthly return <= -100% wipes out the account");
        growth *= 1.0 + m.value;
        values.push_back(m.value);
    }
    Annualized a;
    a.annualized_return = std::pow(growth, 12.0 / static_cast<double>(n)) - 1.0;
    a.annualized_vol = sample_std(values) * kSqrt12;
    return a;
}

CapmFit capm(const MonthlyReturns& model, const MonthlyReturns& benchmark,
             const std::vector<double>& rf_monthly) {
    const std::size_t n = model.size();
    if (n != benchmark.size() || n != rf_monthly.size())
        throw DataError("capm: series length mismatch");
    if (n < 3) throw DataError("capm: need at least 3 months");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = model[i].value - rf_monthly[i];
        x[i] = benchmark[i].value - rf_monthly[i];
    }
    if (all_equal(x)) throw DataError("capm: benchmark excess returns have zero variance");
    const double xm = mean_of(x);
    const double ym = mean_of(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - xm) * (y[i] - ym);
        sxx += (x[i] - xm) * (x[i] - xm);
    }
    if (sxx == 0.0) throw DataError("capm: benchmark excess returns have zero variance");
    CapmFit f;
    f.beta = sxy / sxx;
    f.alpha_annualized = (ym - f.beta * xm) * 12.0;
    return f;
}

RiskRatios risk_ratios(const MonthlyReturns& monthly, const std::vector<double>& rf_monthly,
                       const MonthlyReturns& benchmark) {
    const std::size_t n = monthly.size();
    if (n != rf_monthly.size() || n != benchmark.size())
        throw DataError("risk_ratios: series length mismatch");
    RiskRatios out;
    if (n < 2) return out;

    const Annualized ann = annualize(monthly);
    double rf_growth = 1.0;
    for (double r : rf_monthly) rf_growth *= 1.0 + r;
    const double ann_rf = std::pow(rf_growth, 12.0 / static_cast<double>(n)) - 1.0;
    const double excess_ann = ann.annualized_return - ann_rf;

    if (ann.annualized_vol > 0.0) out.sharpe = excess_ann / ann.annualized_vol;

    double downside_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::min(monthly[i].value - rf_monthly[i], 0.0);
        downside_sq += d * d;
    }
    const double downside = std::sqrt(downside_sq / static_cast<double>(n)) * kSqrt12;
    if (downside > 0.0) out.sortino = excess_ann / downside;

    std::vector<double> track(n);
    for (std::size_t i = 0; i < n; ++i) track[i] = monthly[i].value - benchmark[i].value;
    const double te = sample_std(track) * kSqrt12;
    if (te > 0.0) out.information_ratio = mean_of(track) * 12.0 / te;
    return out;
}

DrawdownStats drawdown_calmar(const MonthlyReturns& monthly) {
    if (monthly.empty()) throw DataError("drawdown_calmar: need at least 1 month");
    DrawdownStats d;
    double equity = 1.0;
    double peak = 1.0;
    for (const auto& m : monthly) {
        equity *= 1.0 + m.value;
        peak = std::max(peak, equity);
        d.max_drawdown = std::min(d.max_drawdown, equity / peak - 1.0);
    }
    if (d.max_drawdown < 0.0 && monthly.size() >= 2)
        d.calmar = annualize(monthly).annualized_return / -d.max_drawdown;
    return d;
}

MonthWinLoss month_win_loss(const MonthlyReturns& monthly) {
    if (monthly.empty()) throw DataError("month_win_loss: need at least 1 month");
    MonthWinLoss w;
    double sum = 0.0, gain = 0.0, loss = 0.0;
    std::size_t wins = 0, losses_strict = 0;
    for (const auto& m : monthly) {
        sum += m.value;
        if (m.value > 0.0) {
            ++wins;
            gain += m.value;
        } else if (m.value < 0.0) {
            ++losses_strict;
            loss += m.value;
        }
    }
    const double n = static_cast<double>(monthly.size());
    w.avg_return = sum / n;
    if (wins > 0) w.avg_gain = gain / static_cast<double>(wins);
    if (losses_strict > 0) w.avg_loss = loss / static_cast<double>(losses_strict);
    w.pct_winning = 100.0 * static_cast<double>(wins) / n;
    w.pct_losing = 100.0 - w.pct_winning;
    return w;
}

ExposureStats exposure_stats(const std::vector<Decision>& decisions,
                             const std::vector<double>& daily_strategy_returns) {
    if (decisions.size() != daily_strategy_returns.size())
        throw DataError("exposure_stats: series length mismatch");
    if (decisions.empty()) throw DataError("exposure_stats: empty series");
    ExposureStats e;
    std::size_t long_days = 0, short_days = 0;
    double long_sum = 0.0, short_sum = 0.0, total = 0.0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        const Decision& d = decisions[i];
        const double r = daily_strategy_returns[i];
        total += r;
        if (d.open()) {
            if (d.direction > 0) {
                ++long_days;
                long_sum += r;
            } else {
                ++short_days;
                short_sum += r;
            }
        }
    }
    const double n = static_cast<double>(decisions.size());
    e.pct_long_days = 100.0 * static_cast<double>(long_days) / n;
    e.pct_short_days = 100.0 * static_cast<double>(short_days) / n;
    if (total != 0.0) {
        e.long_contribution = 100.0 * long_sum / total;
        e.short_contribution = 100.0 * short_sum / total;
    }
    return e;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, double bin_width) {
    if (!(bin_width > 0.0)) throw DataError("histogram: bin width must be positive");
    std::vector<HistogramBin> bins;
    if (values.empty()) return bins;
    auto bin_index = [bin_width](double x) {
        return static_cast<long long>(std::floor(x / bin_width + 0.5));
    };
    long long lo = bin_index(values[0]);
    long long hi = lo;
    for (double x : values) {
        lo = std::min(lo, bin_index(x));
        hi = std::max(hi, bin_index(x));
    }
    bins.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long long k = lo; k <= hi; ++k)
        bins[static_cast<std::size_t>(k - lo)].lower_edge =
            (static_cast<double>(k) - 0.5) * bin_width;
    for (double x : values) ++bins[static_cast<std::size_t>(bin_index(x) - lo)].count;
    return bins;
}

std::vector<double> monthly_rf(const std::vector<YearMonth>& months,
                               const std::vector<RatePoint>& rates) {
    if (rates.empty()) throw DataError("monthly_rf: empty rate series");
    std::vector<double> out;
    out.reserve(months.size());
    for (const YearMonth& ym : months) {
        // last observation dated on or before the month's end
        const Date month_end = {ym.month == 12 ? ym.year + 1 : ym.year,
                                ym.month == 12 ? 1 : ym.month + 1, 1};
        const RatePoint* best = nullptr;
        for (const auto& r : rates) {
            if (r.date < month_end) best = &r;
            else break;
        }
        if (!best)
            throw DataError("monthly_rf: no rate on or before " + std::to_string(ym.year) + "-" +
                            std::to_string(ym.month));
        out.push_back(best->annual_yield / 12.0);
    }
    return out;
}

PerfReport build_perf_report(const MonthlyReturns& model, const MonthlyReturns& benchmark,
                             const std::vector<double>& rf_monthly) {
    if (model.size() != benchmark.size())
        throw DataError("perf report: model and benchmark cover different month counts");
    for (std::size_t i = 0; i < model.size(); ++i)
        if (model[i].month != benchmark[i].month)
            throw DataError("perf report: month misalignment at position " + std::to_string(i));
    PerfReport r;
    r.ann = annualize(model);
    r.capm = capm(model, benchmark, rf_monthly);
    r.ratios = risk_ratios(model, rf_monthly, benchmark);
    r.drawdown = drawdown_calmar(model);
    r.months = month_win_loss(model);
    return r;
}

} // namespace daybt
