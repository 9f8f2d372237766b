#include "daybt/cli/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "daybt/errors.hpp"

namespace daybt {

namespace {

std::string fmt_full(double v) {
    char buf[32]; // shortest representation that parses back exactly
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_opt_full(const std::optional<double>& v) { return v ? fmt_full(*v) : ""; }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// metric key, pretty row label (verbatim table wording), accessor, percent?
struct MetricDef {
    const char* key;
    const char* label;
    std::function<std::optional<double>(const StrategyColumn&)> get;
    bool percent;
};

const std::vector<MetricDef>& classification_defs() {
    static const std::vector<MetricDef> defs = {
        {"accuracy", "Accuracy",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.classification ? std::optional<double>(c.classification->accuracy)
                                     : std::nullopt;
         },
         true},
        {"ppv", "Positive Predictive Value",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.classification ? c.classification->ppv : std::nullopt;
         },
         true},
        {"npv", "Negative Predictive Value",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.classification ? c.classification->npv : std::nullopt;
         },
         true},
    };
    return defs;
}

const std::vector<MetricDef>& summary_defs() {
    static const std::vector<MetricDef> defs = {
        {"mean_daily", "Mean",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? std::optional<double>(c.daily->mean) : std::nullopt;
         },
         true},
        {"std_daily", "Standard deviation",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? std::optional<double>(c.daily->std_dev) : std::nullopt;
         },
         true},
        {"min_daily", "Minimum",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? std::optional<double>(c.daily->min) : std::nullopt;
         },
         true},
        {"max_daily", "Maximum",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? std::optional<double>(c.daily->max) : std::nullopt;
         },
         true},
        {"skew_daily", "Skew",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? c.daily->skew : std::nullopt;
         },
         false},
        {"kurtosis_daily", "Kurtosis",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.daily ? c.daily->kurtosis : std::nullopt;
         },
         false},
    };
    return defs;
}

const std::vector<MetricDef>& standard_perf_defs() {
    static const std::vector<MetricDef> defs = {
        {"alpha_annualized", "Alpha (annualised)",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->capm.alpha_annualized) : std::nullopt;
         },
         true},
        {"annualized_return", "Annualised Return",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->ann.annualized_return) : std::nullopt;
         },
         true},
        {"avg_monthly_return", "Average Return (Monthly)",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->months.avg_return) : std::nullopt;
         },
         true},
        {"avg_monthly_gain", "Average Gain (Monthly)",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->months.avg_gain : std::nullopt;
         },
         true},
        {"avg_monthly_loss", "Average Loss (Monthly)",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->months.avg_loss : std::nullopt;
         },
         true},
        {"annualized_vol", "Annualized Volatility",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->ann.annualized_vol) : std::nullopt;
         },
         true},
        {"beta", "Beta",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->capm.beta) : std::nullopt;
         },
         false},
        {"sharpe", "Sharpe Ratio",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->ratios.sharpe : std::nullopt;
         },
         false},
        {"sortino", "Sortino Ratio",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->ratios.sortino : std::nullopt;
         },
         false},
    };
    return defs;
}

const std::vector<MetricDef>& further_perf_defs() {
    static const std::vector<MetricDef> defs = {
        {"max_drawdown", "Maximum Drawdown",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->drawdown.max_drawdown) : std::nullopt;
         },
         true},
        {"pct_winning_months", "% Winning Months",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->months.pct_winning / 100.0)
                           : std::nullopt;
         },
         true},
        {"pct_losing_months", "% Losing Months",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? std::optional<double>(c.perf->months.pct_losing / 100.0)
                           : std::nullopt;
         },
         true},
        {"calmar", "Calmar Ratio",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->drawdown.calmar : std::nullopt;
         },
         false},
        {"information_ratio", "Information Ratio",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.perf ? c.perf->ratios.information_ratio : std::nullopt;
         },
         false},
    };
    return defs;
}

const std::vector<MetricDef>& exposure_defs() {
    static const std::vector<MetricDef> defs = {
        {"pct_long_days", "% Exposure Long",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.exposure ? std::optional<double>(c.exposure->pct_long_days / 100.0)
                               : std::nullopt;
         },
         true},
        {"pct_short_days", "% Exposure Short",
         [](const StrategyColumn& c) -> std::optional<double> {
             return c.exposure ? std::optional<double>(c.exposure->pct_short_days / 100.0)
                               : std::nullopt;
         },
         true},
        {"long_contribution", "Long Contribution",
         [](const StrategyColumn& c) -> std::optional<double> {
             if (!c.exposure || !c.exposure->long_contribution) return std::nullopt;
             return *c.exposure->long_contribution / 100.0;
         },
         true},
        {"short_contribution", "Short Contribution",
         [](const StrategyColumn& c) -> std::optional<double> {
             if (!c.exposure || !c.exposure->short_contribution) return std::nullopt;
             return *c.exposure->short_contribution / 100.0;
         },
         true},
    };
    return defs;
}

struct Section {
    const char* heading;
    const std::vector<MetricDef>* defs;
};

std::vector<Section> all_sections() {
    return {
        {"Prediction Accuracy", &classification_defs()},
        {"Summary Statistics (Based on Daily Daytime Returns)", &summary_defs()},
        {"Standard Performance Metrics (Based on Monthly Returns)", &standard_perf_defs()},
        {"Further Performance Metrics (Based on Monthly Returns)", &further_perf_defs()},
        {"Market Exposure Efficiency and Contribution of Signal Direction to Overall Profit",
         &exposure_defs()},
    };
}

} // namespace

std::string fmt_pct(const std::optional<double>& fraction) {
    if (!fraction) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *fraction * 100.0);
    return buf;
}

std::string fmt_plain(const std::optional<double>& value) {
    if (!value) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *value);
    return buf;
}

std::string format_markdown_report(const std::string& title,
                                   const std::vector<StrategyColumn>& columns) {
    std::string md = "# " + title + "\n";
    for (const Section& section : all_sections()) {
        bool any = false;
        for (const auto& def : *section.defs)
            for (const auto& col : columns)
                if (def.get(col)) any = true;
        if (!any) continue;
        md += "\n## " + std::string(section.heading) + "\n\n|  |";
        for (const auto& col : columns) md += " " + col.name + " |";
        md += "\n| --- |";
        for (std::size_t i = 0; i < columns.size(); ++i) md += " --- |";
        md += "\n";
        for (const auto& def : *section.defs) {
            md += "| " + std::string(def.label) + " |";
            for (const auto& col : columns) {
                const auto v = def.get(col);
                md += " " + (def.percent ? fmt_pct(v) : fmt_plain(v)) + " |";
            }
            md += "\n";
        }
    }
    return md;
}

std::string format_report_csv(const std::vector<StrategyColumn>& columns) {
    std::string header = "strategy";
    for (const Section& section : all_sections())
        for (const auto& def : *section.defs) header += "," + std::string(def.key);
    std::string out = header + "\n";
    for (const auto& col : columns) {
        out += col.name;
        for (const Section& section : all_sections())
            for (const auto& def : *section.defs) out += "," + fmt_opt_full(def.get(col));
        out += "\n";
    }
    return out;
}

std::vector<StrategyColumn> parse_report_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw DataError("report csv: empty");
    const auto header = split_csv_line(line);
    std::vector<StrategyColumn> columns;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("report csv: field count mismatch");
        StrategyColumn col;
        col.name = fields[0];
        col.classification.emplace();
        col.daily.emplace();
        col.perf.emplace();
        col.exposure.emplace();
        std::size_t i = 1;
        auto next = [&]() -> std::optional<double> {
            const std::string& f = fields[i++];
            if (f.empty()) return std::nullopt;
            return std::stod(f);
        };
        auto& cls = *col.classification;
        cls.accuracy = next().value_or(0.0);
        cls.ppv = next();
        cls.npv = next();
        auto& d = *col.daily;
        d.mean = next().value_or(0.0);
        d.std_dev = next().value_or(0.0);
        d.min = next().value_or(0.0);
        d.max = next().value_or(0.0);
        d.skew = next();
        d.kurtosis = next();
        auto& p = *col.perf;
        p.capm.alpha_annualized = next().value_or(0.0);
        p.ann.annualized_return = next().value_or(0.0);
        p.months.avg_return = next().value_or(0.0);
        p.months.avg_gain = next();
        p.months.avg_loss = next();
        p.ann.annualized_vol = next().value_or(0.0);
        p.capm.beta = next().value_or(0.0);
        p.ratios.sharpe = next();
        p.ratios.sortino = next();
        p.drawdown.max_drawdown = next().value_or(0.0);
        p.months.pct_winning = next().value_or(0.0) * 100.0;
        p.months.pct_losing = next().value_or(0.0) * 100.0;
        p.drawdown.calmar = next();
        p.ratios.information_ratio = next();
        auto& e = *col.exposure;
        e.pct_long_days = next().value_or(0.0) * 100.0;
        e.pct_short_days = next().value_or(0.0) * 100.0;
        if (auto v = next()) e.long_contribution = *v * 100.0;
        if (auto v = next()) e.short_contribution = *v * 100.0;
        columns.push_back(std::move(col));
    }
    return columns;
}

std::string format_monthly_csv(const MonthlyReturns& monthly) {
    std::string out = "year,month,return_percent\n";
    for (const auto& m : monthly)
        out += std::to_string(m.month.year) + "," + std::to_string(m.month.month) + "," +
               fmt_full(m.value * 100.0) + "\n";
    return out;
}

MonthlyReturns read_monthly_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    MonthlyReturns out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("year", 0) == 0)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        try {
            MonthlyReturn m;
            m.month.year = std::stoi(fields[0]);
            m.month.month = std::stoi(fields[1]);
            m.value = std::stod(fields[2]) / 100.0;
            if (m.month.month < 1 || m.month.month > 12) throw std::invalid_argument("month");
            out.push_back(m);
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(line_no) + ": bad row '" + line + "'");
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i - 1].month < out[i].month))
            throw DataError(path + ": months are not strictly increasing");
    return out;
}

std::string format_signals_csv(const SignalSeries& series) {
    std::string out = "date,direction,scale,strategy_return\n";
    for (const auto& p : series)
        out += p.date.iso() + "," + std::to_string(p.decision.direction) + "," +
               fmt_full(p.decision.scale) + "," + fmt_full(p.strategy_return) + "\n";
    return out;
}

SignalSeries read_signals_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    SignalSeries out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("date", 0) == 0)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 4 fields");
        SignalPoint p;
        p.date = parse_date(fields[0]);
        p.decision.direction = std::stoi(fields[1]);
        p.decision.scale = std::stod(fields[2]);
        p.strategy_return = std::stod(fields[3]);
        out.push_back(p);
    }
    return out;
}

std::string format_equity_csv(const std::vector<EquityPoint>& curve) {
    std::string out = "date,value\n";
    for (const auto& p : curve) out += p.date.iso() + "," + fmt_full(p.value) + "\n";
    return out;
}

std::vector<EquityPoint> read_equity_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<EquityPoint> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("date", 0) == 0)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
        out.push_back({parse_date(fields[0]), std::stod(fields[1])});
    }
    return out;
}

std::string format_hist_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_lower_edge,count\n";
    for (const auto& b : bins)
        out += fmt_full(b.lower_edge) + "," + std::to_string(b.count) + "\n";
    return out;
}

std::vector<HistogramBin> read_hist_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<HistogramBin> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("bin", 0) == 0)) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
        out.push_back({std::stod(fields[0]),
                       static_cast<std::uint64_t>(std::stoull(fields[1]))});
    }
    return out;
}

} // namespace daybt
