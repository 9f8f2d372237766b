#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "daybt/cli/commands.hpp"
#include "daybt/cli/report.hpp"
#include "daybt/errors.hpp"
#include "test_support.hpp"

using namespace daybt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct Workspace {
    fs::path root;

    explicit Workspace(const std::string& name) {
        root = fs::temp_directory_path() / ("daybt_test_" + name);
        fs::remove_all(root);
        fs::create_directories(root);
    }

    fs::path write_inputs(std::size_t n_days, std::uint64_t seed) const {
        const auto series = testing::make_synthetic_series(n_days, seed);
        spit(root / "es.csv", bars_to_csv(series.es, true));
        spit(root / "vix.csv", bars_to_csv(series.vix, false));
        spit(root / "rates.csv", rates_to_csv(series.rates));
        return root;
    }

    fs::path write_config(const std::string& name, const std::string& body) const {
        spit(root / name, body);
        return root / name;
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DAYBT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config parsing: defaults, overrides, and validation") {
    Workspace ws("config");
    ws.write_inputs(320, 1);
    const auto cfg_path = ws.write_config("run.conf",
                                          "# experiment\n"
                                          "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                          "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                          "rates_csv = " + (ws.root / "rates.csv").string() + "\n"
                                          "model = gbt\n"
                                          "gbt.n_rounds = 12   # tuned down\n"
                                          "master_seed = 9\n");
    const ExperimentConfig cfg = load_experiment_config(cfg_path.string(), {});
    CHECK(cfg.model_id == "gbt");
    CHECK(cfg.gbt.boost.n_rounds == 12);
    CHECK(cfg.train_window == 250);
    CHECK(cfg.master_seed == 9);

    ConfigOverrides ov;
    ov.master_seed = 77;
    CHECK(load_experiment_config(cfg_path.string(), ov).master_seed == 77);

    const auto bad_key = ws.write_config("bad_key.conf",
                                         "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                         "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                         "rates_csv = " + (ws.root / "rates.csv").string() + "\n"
                                         "gbt.rounds = 12\n");
    CHECK_THROWS_AS(load_experiment_config(bad_key.string(), {}), ConfigError);

    const auto bad_model = ws.write_config("bad_model.conf",
                                           "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                           "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                           "rates_csv = " + (ws.root / "rates.csv").string() +
                                               "\n"
                                               "model = prophet\n");
    CHECK_THROWS_AS(load_experiment_config(bad_model.string(), {}), ConfigError);
}

TEST_CASE("model_a forces the one-day test window") {
    Workspace ws("modela_window");
    ws.write_inputs(300, 2);
    const auto cfg_path = ws.write_config("run.conf",
                                          "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                          "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                          "rates_csv = " + (ws.root / "rates.csv").string() + "\n"
                                          "model = model_a\n"
                                          "test_window = 50\n");
    CHECK(load_experiment_config(cfg_path.string(), {}).test_window == 1);
}

TEST_CASE("report labels match the published row wording") {
    StrategyColumn col;
    col.name = "passive";
    col.classification = ClassificationRates{0.5461, 0.5461, std::nullopt};
    const std::string md = format_markdown_report("t", {col});
    for (const char* label :
         {"Accuracy", "Positive Predictive Value", "Negative Predictive Value"})
        CHECK(md.find(label) != std::string::npos);
    CHECK(md.find("| -") != std::string::npos); // absent NPV renders as "-"

    StrategyColumn perf_col;
    perf_col.name = "x";
    perf_col.daily = SummaryStats{0.0002, 0.0096, -0.0564, 0.048, -0.27, 4.01};
    PerfReport pr;
    pr.ann = {0.0309, 0.1310};
    pr.capm = {0.0, 1.0};
    pr.ratios = {0.15, 0.22, std::nullopt};
    pr.drawdown = {-0.1956, 0.70};
    pr.months = {0.0033, 0.0279, -0.0313, 58.33, 41.67};
    perf_col.perf = pr;
    perf_col.exposure = ExposureStats{100.0, 0.0, 100.0, 0.0};
    const std::string full = format_markdown_report("t", {perf_col});
    for (const char* label :
         {"Mean", "Standard deviation", "Minimum", "Maximum", "Skew", "Kurtosis",
          "Alpha (annualised)", "Annualised Return", "Average Return (Monthly)",
          "Average Gain (Monthly)", "Average Loss (Monthly)", "Annualized Volatility", "Beta",
          "Sharpe Ratio", "Sortino Ratio", "Maximum Drawdown", "% Winning Months",
          "% Losing Months", "Calmar Ratio", "Information Ratio", "% Exposure Long",
          "% Exposure Short", "Long Contribution", "Short Contribution"})
        CHECK(full.find(label) != std::string::npos);
    CHECK(full.find("3.09%") != std::string::npos);
    CHECK(full.find("1.00") != std::string::npos);
}

TEST_CASE("report csv round-trips the column values") {
    StrategyColumn col;
    col.name = "gbt";
    col.classification = ClassificationRates{0.51, 0.52, 0.50};
    col.daily = SummaryStats{0.0003, 0.0096, -0.0564, 0.0465, -0.17, 4.01};
    PerfReport pr;
    pr.ann = {0.0693, 0.113};
    pr.capm = {0.04, 0.12};
    pr.ratios = {0.37, 0.67, 0.83};
    pr.drawdown = {-0.1177, 0.65};
    pr.months = {0.0051, 0.0287, -0.0199, 51.39, 48.61};
    col.perf = pr;
    col.exposure = ExposureStats{57.19, 42.81, 71.74, 28.26};
    const auto parsed = parse_report_csv(format_report_csv({col}));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].name == "gbt");
    CHECK(parsed[0].classification->accuracy == doctest::Approx(0.51));
    CHECK(parsed[0].perf->ann.annualized_return == doctest::Approx(0.0693));
    CHECK(parsed[0].perf->months.pct_winning == doctest::Approx(51.39));
    CHECK(parsed[0].exposure->short_contribution.value() == doctest::Approx(28.26));
}

TEST_CASE("cmd_run writes a complete deterministic bundle") {
    Workspace ws("run");
    ws.write_inputs(340, 3);
    const std::string base_cfg =
        "es_csv = " + (ws.root / "es.csv").string() + "\n"
        "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
        "rates_csv = " + (ws.root / "rates.csv").string() + "\n"
        "model = passive\n";
    const auto cfg_path = ws.write_config("run.conf", base_cfg);

    const std::string out1 = (ws.root / "out1").string();
    const std::string out2 = (ws.root / "out2").string();
    REQUIRE(run_cli("run --config " + cfg_path.string() + " --out " + out1) == 0);
    REQUIRE(run_cli("run --config " + cfg_path.string() + " --out " + out2) == 0);

    const std::vector<std::string> files = {"manifest.json", "signals.csv", "equity.csv",
                                            "monthly.csv",   "report.csv",  "report.md",
                                            "hist.csv",      "hist.svg",    "equity.svg"};
    for (const auto& f : files) {
        CAPTURE(f);
        REQUIRE(fs::exists(fs::path(out1) / f));
        CHECK(slurp(fs::path(out1) / f) == slurp(fs::path(out2) / f)); // byte-identical rerun
    }

    // emitted CSVs re-parse under the project readers
    const auto signals = read_signals_csv(out1 + "/signals.csv");
    CHECK(signals.size() == 340 - 1 - 250);
    for (const auto& p : signals) {
        CHECK(p.decision.direction == +1);
        CHECK(p.decision.scale == 1.0);
    }
    const auto monthly = read_monthly_csv(out1 + "/monthly.csv");
    CHECK(monthly.size() >= 2);
    const auto equity = read_equity_csv(out1 + "/equity.csv");
    CHECK(equity.size() == signals.size());
    const auto bins = read_hist_csv(out1 + "/hist.csv");
    std::uint64_t bin_total = 0;
    for (const auto& b : bins) bin_total += b.count;
    CHECK(bin_total == signals.size());

    // passive vs passive: beta exactly 1, alpha exactly 0
    const std::string md = slurp(fs::path(out1) / "report.md");
    CHECK(md.find("| Beta | 1.00 |") != std::string::npos);
    CHECK(md.find("| Alpha (annualised) | 0.00% |") != std::string::npos);
    CHECK(md.find("| % Exposure Long | 100.00% |") != std::string::npos);
}

TEST_CASE("cmd_run exit codes follow the error category") {
    Workspace ws("exit_codes");
    ws.write_inputs(300, 4);
    // missing rates file -> data error (2)
    const auto cfg_missing = ws.write_config("missing.conf",
                                             "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                             "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                             "rates_csv = " + (ws.root / "nope.csv").string() +
                                                 "\n");
    CHECK(run_cli("run --config " + cfg_missing.string() + " --out " +
                  (ws.root / "o").string()) == 2);
    // bad config key -> config error (1)
    const auto cfg_bad = ws.write_config("bad.conf",
                                         "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                         "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                         "rates_csv = " + (ws.root / "rates.csv").string() + "\n"
                                         "model = nope\n");
    CHECK(run_cli("run --config " + cfg_bad.string() + " --out " + (ws.root / "o").string()) ==
          1);
    // insufficient training data -> model error (3)
    Workspace tiny("tiny");
    tiny.write_inputs(260, 5);
    const auto cfg_tiny = tiny.write_config("tiny.conf",
                                            "es_csv = " + (tiny.root / "es.csv").string() + "\n"
                                            "vix_csv = " + (tiny.root / "vix.csv").string() +
                                                "\n"
                                                "rates_csv = " +
                                                (tiny.root / "rates.csv").string() + "\n"
                                                "model = lstm\n"
                                                "train_window = 20\n"
                                                "lstm.sequence_length = 20\n");
    CHECK(run_cli("run --config " + cfg_tiny.string() + " --out " + (tiny.root / "o").string()) ==
          3);
    // nonexistent config file -> config error (1)
    CHECK(run_cli("run --config /does/not/exist.conf") == 1);
}

TEST_CASE("cmd_compare consolidates runs and rejects mismatched datasets") {
    Workspace ws("compare");
    ws.write_inputs(340, 6);
    const std::string common =
        "es_csv = " + (ws.root / "es.csv").string() + "\n"
        "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
        "rates_csv = " + (ws.root / "rates.csv").string() + "\n";
    const auto cfg_passive = ws.write_config("passive.conf", common + "model = passive\n");
    const auto cfg_gbt =
        ws.write_config("gbt.conf", common + "model = gbt\ngbt.n_rounds = 8\n");
    const std::string run_p = (ws.root / "run_p").string();
    const std::string run_g = (ws.root / "run_g").string();
    REQUIRE(run_cli("run --config " + cfg_passive.string() + " --out " + run_p) == 0);
    REQUIRE(run_cli("run --config " + cfg_gbt.string() + " --out " + run_g) == 0);

    const std::string cmp = (ws.root / "cmp").string();
    REQUIRE(run_cli("compare " + run_g + " " + run_p + " --out " + cmp) == 0);
    const std::string md = slurp(fs::path(cmp) / "compare.md");
    // passive column comes first even though it was listed second
    CHECK(md.find("|  | passive | gbt |") != std::string::npos);
    CHECK(fs::exists(fs::path(cmp) / "compare.csv"));
    CHECK(fs::exists(fs::path(cmp) / "equity_overlay.svg"));

    // self-compare yields identical columns
    const std::string cmp_self = (ws.root / "cmp_self").string();
    REQUIRE(run_cli("compare " + run_p + " " + run_p + " --out " + cmp_self) == 0);
    const auto cols = parse_report_csv(slurp(fs::path(cmp_self) / "compare.csv"));
    REQUIRE(cols.size() == 2);
    CHECK(format_report_csv({cols[0]}) == format_report_csv({cols[1]}));

    // different dataset -> fingerprint mismatch
    Workspace other("compare_other");
    other.write_inputs(340, 7);
    const auto cfg_other = other.write_config("p.conf",
                                              "es_csv = " + (other.root / "es.csv").string() +
                                                  "\n"
                                                  "vix_csv = " +
                                                  (other.root / "vix.csv").string() + "\n"
                                                  "rates_csv = " +
                                                  (other.root / "rates.csv").string() + "\n");
    const std::string run_o = (other.root / "run").string();
    REQUIRE(run_cli("run --config " + cfg_other.string() + " --out " + run_o) == 0);
    CHECK(run_cli("compare " + run_p + " " + run_o + " --out " + (ws.root / "x").string()) == 2);
}

TEST_CASE("cmd_metrics recomputes the recorded-monthlies reports") {
    const std::string data = testing::test_data_dir();
    Workspace ws("metrics");
    const std::string out = (ws.root / "m").string();
    REQUIRE(run_cli("metrics --monthly " + data + "/monthly_passive_2018_2023.csv --rates " +
                    data + "/tbill_3m_2018_2023.csv --benchmark " + data +
                    "/monthly_passive_2018_2023.csv --out " + out) == 0);
    const auto cols = parse_report_csv(slurp(fs::path(out) / "report.csv"));
    REQUIRE(cols.size() == 1); // benchmark == model collapses to one column
    CHECK(cols[0].perf->capm.beta == doctest::Approx(1.0));
    CHECK_FALSE(cols[0].perf->ratios.information_ratio.has_value());
    CHECK(cols[0].perf->ann.annualized_return == doctest::Approx(0.0309).epsilon(0.02));

    // month misalignment is an error
    spit(ws.root / "short.csv", "year,month,return_percent\n2018,1,1.0\n2018,2,2.0\n");
    CHECK(run_cli("metrics --monthly " + (ws.root / "short.csv").string() + " --rates " + data +
                  "/tbill_3m_2018_2023.csv --benchmark " + data +
                  "/monthly_passive_2018_2023.csv --out " + out) == 2);
}

TEST_CASE("validate-data summarizes the dataset") {
    Workspace ws("validate");
    ws.write_inputs(300, 8);
    const auto cfg = ws.write_config("v.conf",
                                     "es_csv = " + (ws.root / "es.csv").string() + "\n"
                                     "vix_csv = " + (ws.root / "vix.csv").string() + "\n"
                                     "rates_csv = " + (ws.root / "rates.csv").string() + "\n");
    CHECK(run_cli("validate-data --config " + cfg.string()) == 0);
}
