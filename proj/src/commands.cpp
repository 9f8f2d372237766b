#include "daybt/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "daybt/cli/report.hpp"
#include "daybt/cli/svg.hpp"
#include "daybt/errors.hpp"
#include "daybt/hash.hpp"
#include "daybt/version.hpp"

namespace daybt {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Dataset load_dataset(const ExperimentConfig& cfg) {
    const auto es = load_bar_csv(cfg.es_csv, /*has_volume=*/true);
    const auto vix = load_bar_csv(cfg.vix_csv, /*has_volume=*/false);
    const auto rates = load_rates_csv(cfg.rates_csv);
    Dataset ds = align_sessions(es, vix, rates);
    ds.es_path = cfg.es_csv;
    ds.vix_path = cfg.vix_csv;
    ds.rates_path = cfg.rates_csv;
    if (cfg.date_start || cfg.date_end) {
        std::vector<TradingDay> kept;
        for (const auto& day : ds.days) {
            if (cfg.date_start && day.date < *cfg.date_start) continue;
            if (cfg.date_end && *cfg.date_end < day.date) continue;
            kept.push_back(day);
        }
        ds.days = std::move(kept);
    }
    if (ds.empty()) throw DataError("no trading days after alignment and date filtering");
    return ds;
}

std::string dataset_fingerprint(const ExperimentConfig& cfg) {
    Fnv1a h;
    hash_file(h, cfg.es_csv);
    hash_file(h, cfg.vix_csv);
    hash_file(h, cfg.rates_csv);
    return h.hex();
}

ReturnSeries strategy_returns(const SignalSeries& series) {
    ReturnSeries out;
    out.reserve(series.size());
    for (const auto& p : series) out.push_back({p.date, p.strategy_return});
    return out;
}

StrategyColumn build_column(const std::string& name, const Dataset& ds,
                            const WalkForwardPlan& plan, const SignalSeries& series,
                            const MonthlyReturns& monthly, const MonthlyReturns& bench_monthly,
                            const std::vector<double>& rf) {
    StrategyColumn col;
    col.name = name;

    std::vector<int> predictions, labels;
    std::vector<Decision> decisions;
    std::vector<double> daily;
    predictions.reserve(series.size());
    std::size_t si = 0;
    for (const auto& w : plan.windows)
        for (std::size_t t = w.test.begin; t < w.test.end; ++t, ++si) {
            const auto& p = series[si];
            predictions.push_back(p.decision.open() ? p.decision.direction : 0);
            labels.push_back(ds[t].label);
            decisions.push_back(p.decision);
            daily.push_back(p.strategy_return);
        }

    col.classification = classification_rates(confusion_counts(predictions, labels));
    col.daily = summary_stats(daily);
    col.perf = build_perf_report(monthly, bench_monthly, rf);
    col.exposure = exposure_stats(decisions, daily);
    return col;
}

nlohmann::ordered_json manifest_json(const ExperimentConfig& cfg, const std::string& fingerprint,
                                     const Dataset& ds, const WalkForwardPlan& plan) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_format"] = kConfigFormat;
    nlohmann::ordered_json resolved;
    for (const auto& [k, v] : cfg.resolved) resolved[k] = v;
    j["config"] = resolved;
    j["dataset_fingerprint"] = fingerprint;
    j["n_days"] = ds.size();
    j["first_date"] = ds.days.front().date.iso();
    j["last_date"] = ds.days.back().date.iso();
    j["window_count"] = plan.windows.size();
    j["window_seeds"] = window_seeds(plan, cfg.master_seed);
    return j;
}

constexpr double kHistBinWidth = 0.0033; // 0.33% daily-return bins

} // namespace

void cmd_run(const std::string& config_path, const ConfigOverrides& overrides) {
    const ExperimentConfig cfg = load_experiment_config(config_path, overrides);
    const Dataset ds = load_dataset(cfg);
    const std::string fingerprint = dataset_fingerprint(cfg);
    const WalkForwardPlan plan = plan_windows(ds.size(), cfg.train_window, cfg.test_window);

    const SignalSeries model_series =
        run_walkforward(make_model_factory(cfg, cfg.model_id), ds, plan, cfg.master_seed,
                        cfg.cost_per_side);
    const ReturnSeries model_daily = strategy_returns(model_series);
    const MonthlyReturns model_monthly = compound_monthly(model_daily);

    const bool self_benchmark = cfg.benchmark_id == cfg.model_id;
    SignalSeries bench_series;
    if (self_benchmark) {
        bench_series = model_series;
    } else {
        bench_series = run_walkforward(make_model_factory(cfg, cfg.benchmark_id), ds, plan,
                                       cfg.master_seed, cfg.cost_per_side);
    }
    const ReturnSeries bench_daily = strategy_returns(bench_series);
    const MonthlyReturns bench_monthly = compound_monthly(bench_daily);

    std::vector<YearMonth> months;
    for (const auto& m : model_monthly) months.push_back(m.month);
    const auto rates = load_rates_csv(cfg.rates_csv);
    const std::vector<double> rf = monthly_rf(months, rates);

    std::vector<StrategyColumn> columns;
    if (!self_benchmark)
        columns.push_back(build_column(cfg.benchmark_id, ds, plan, bench_series, bench_monthly,
                                       bench_monthly, rf));
    columns.push_back(
        build_column(cfg.model_id, ds, plan, model_series, model_monthly, bench_monthly, rf));

    const auto curve = equity_curve(model_daily);
    const auto bench_curve = equity_curve(bench_daily);

    std::vector<double> daily_values;
    for (const auto& r : model_daily) daily_values.push_back(r.value);
    const auto bins = histogram(daily_values, kHistBinWidth);

    const fs::path out(cfg.out_dir);
    fs::create_directories(out);
    write_file(out / "manifest.json", manifest_json(cfg, fingerprint, ds, plan).dump(2) + "\n");
    write_file(out / "signals.csv", format_signals_csv(model_series));
    write_file(out / "equity.csv", format_equity_csv(curve));
    write_file(out / "monthly.csv", format_monthly_csv(model_monthly));
    write_file(out / "report.csv", format_report_csv(columns));
    write_file(out / "report.md",
               format_markdown_report(cfg.name + " - " + cfg.model_id + " vs " + cfg.benchmark_id,
                                      columns));
    write_file(out / "hist.csv", format_hist_csv(bins));
    write_file(out / "hist.svg",
               svg_histogram_chart("Distribution of Daily Strategy Returns (" + cfg.model_id + ")",
                                   bins, kHistBinWidth));
    std::vector<NamedCurve> curves;
    if (!self_benchmark) curves.push_back({cfg.benchmark_id, bench_curve});
    curves.push_back({cfg.model_id, curve});
    write_file(out / "equity.svg", svg_equity_chart("Cumulative Daytime Profit", curves));

    std::cout << "run complete: " << model_series.size() << " signal days -> " << out.string()
              << "\n";
}

void cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    if (run_dirs.size() < 2) throw ConfigError("compare needs at least 2 run directories");

    struct Run {
        std::string model;
        std::string fingerprint;
        StrategyColumn column;
        std::vector<EquityPoint> curve;
    };
    std::vector<Run> runs;
    for (const auto& dir : run_dirs) {
        const fs::path p(dir);
        const auto manifest = nlohmann::json::parse(read_file(p / "manifest.json"));
        Run run;
        run.model = manifest.at("config").at("model").get<std::string>();
        run.fingerprint = manifest.at("dataset_fingerprint").get<std::string>();
        const auto columns = parse_report_csv(read_file(p / "report.csv"));
        for (const auto& col : columns)
            if (col.name == run.model) run.column = col;
        if (run.column.name.empty())
            throw DataError(dir + ": report.csv has no column for model '" + run.model + "'");
        run.curve = read_equity_csv((p / "equity.csv").string());
        runs.push_back(std::move(run));
    }
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (runs[i].fingerprint != runs[0].fingerprint)
            throw DataError("dataset fingerprint mismatch: " + run_dirs[0] + " has " +
                            runs[0].fingerprint + ", " + run_dirs[i] + " has " +
                            runs[i].fingerprint);

    // passive first, then input order
    std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
        return (a.model == "passive") > (b.model == "passive");
    });

    std::vector<StrategyColumn> columns;
    std::vector<NamedCurve> curves;
    for (const auto& run : runs) {
        columns.push_back(run.column);
        curves.push_back({run.model, run.curve});
    }

    const fs::path out(out_dir);
    fs::create_directories(out);
    write_file(out / "compare.md", format_markdown_report("Strategy Comparison", columns));
    write_file(out / "compare.csv", format_report_csv(columns));
    write_file(out / "equity_overlay.svg",
               svg_equity_chart("Cumulative Daytime Profit", curves));
    std::cout << "compared " << runs.size() << " runs -> " << out.string() << "\n";
}

void cmd_metrics(const std::string& monthly_csv, const std::string& rates_csv,
                 const std::string& benchmark_csv, const std::string& out_dir) {
    const MonthlyReturns model = read_monthly_csv(monthly_csv);
    const MonthlyReturns bench = read_monthly_csv(benchmark_csv);
    const auto rates = load_rates_csv(rates_csv);
    std::vector<YearMonth> months;
    for (const auto& m : model) months.push_back(m.month);
    const std::vector<double> rf = monthly_rf(months, rates);

    auto stem = [](const std::string& path) { return fs::path(path).stem().string(); };
    StrategyColumn bench_col;
    bench_col.name = stem(benchmark_csv);
    bench_col.perf = build_perf_report(bench, bench, rf);
    StrategyColumn model_col;
    model_col.name = stem(monthly_csv);
    model_col.perf = build_perf_report(model, bench, rf);

    std::vector<StrategyColumn> columns;
    if (benchmark_csv != monthly_csv) columns.push_back(bench_col);
    columns.push_back(model_col);

    const fs::path out(out_dir);
    fs::create_directories(out);
    write_file(out / "report.md",
               format_markdown_report("Monthly Performance Metrics", columns));
    write_file(out / "report.csv", format_report_csv(columns));
    std::cout << "metrics report for " << model.size() << " months -> " << out.string() << "\n";
}

void cmd_validate_data(const std::string& config_path) {
    const ExperimentConfig cfg = load_experiment_config(config_path, {});
    const Dataset ds = load_dataset(cfg);
    std::size_t positives = 0;
    for (const auto& d : ds.days) positives += d.label > 0 ? 1 : 0;
    std::cout << "dataset ok: " << ds.size() << " trading days, "
              << ds.days.front().date.iso() << " .. " << ds.days.back().date.iso() << "\n"
              << "positive daytime days: " << positives << " (" << std::fixed
              << 100.0 * static_cast<double>(positives) / static_cast<double>(ds.size())
              << "%)\n"
              << "fingerprint: " << dataset_fingerprint(cfg) << "\n";
}

} // namespace daybt
