// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "daybt/backtest.hpp"
#include "daybt/cli/report.hpp"
#include "daybt/data.hpp"
#include "daybt/learners/forest.hpp"
#include "daybt/learners/gbt.hpp"
#include "daybt/learners/lstm.hpp"
#include "daybt/metrics.hpp"
#include "daybt/parallel.hpp"
#include "daybt/rng.hpp"
#include "daybt/signals/model_a.hpp"
#include "../test_support.hpp"

namespace fs = std::filesystem;
using namespace daybt;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }

    void expect_near(double actual, double target, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << actual << ", want " << target << " +/- " << tol;
        expect(std::abs(actual - target) <= tol, os.str());
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DAYBT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("daybt_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const StrategyColumn* find_column(const std::vector<StrategyColumn>& cols,
                                  const std::string& name) {
    for (const auto& c : cols)
        if (c.name == name) return &c;
    return nullptr;
}

// ---- criteria 1 & 2: the published-monthlies metric oracle ----

StrategyColumn metrics_via_cli(Criterion& c, const std::string& monthly_stem,
                               const std::string& out_name) {
    const std::string data = DAYBT_TEST_DATA_DIR;
    const fs::path out = fresh_dir(out_name);
    const int rc = run_cli("metrics --monthly " + data + "/" + monthly_stem +
                           ".csv --rates " + data + "/tbill_3m_2018_2023.csv --benchmark " +
                           data + "/monthly_passive_2018_2023.csv --out " + out.string());
    c.expect(rc == 0, "metrics command exited with " + std::to_string(rc));
    const auto cols = parse_report_csv(slurp(out / "report.csv"));
    const auto* col = find_column(cols, monthly_stem);
    if (!col) {
        c.expect(false, "no column " + monthly_stem + " in report.csv");
        static StrategyColumn empty;
        return empty;
    }
    return *col;
}

Criterion criterion1() {
    Criterion c;
    c.name = "1: passive monthlies reproduce the published metric row";
    const auto start = Clock::now();
    const auto col = metrics_via_cli(c, "monthly_passive_2018_2023", "c1");
    if (!col.perf) return c;
    const PerfReport& p = *col.perf;
    c.expect_near(p.ann.annualized_return * 100, 3.09, 0.05, "annualized return %");
    c.expect_near(p.ann.annualized_vol * 100, 13.10, 0.10, "annualized volatility %");
    c.expect(p.capm.beta == 1.0, "beta must be exactly 1");
    c.expect(std::abs(p.capm.alpha_annualized) <= 1e-12, "alpha must be exactly 0");
    c.expect_near(p.drawdown.max_drawdown * 100, -19.56, 0.10, "max drawdown %");
    c.expect_near(p.drawdown.calmar.value_or(-999), 0.70, 0.05, "calmar");
    c.expect_near(p.months.pct_winning, 100.0 * 42 / 72, 1e-9, "% winning months");
    c.expect(seconds_since(start) < 1.0, "criterion must finish within 1s");
    return c;
}

Criterion criterion2() {
    Criterion c;
    c.name = "2: model_a monthlies reproduce the published metric row";
    const auto col = metrics_via_cli(c, "monthly_model_a_2018_2023", "c2");
    if (!col.perf) return c;
    const PerfReport& p = *col.perf;
    c.expect_near(p.ann.annualized_return * 100, 14.92, 0.05, "annualized return %");
    c.expect_near(p.ann.annualized_vol * 100, 10.26, 0.10, "annualized volatility %");
    c.expect_near(p.drawdown.max_drawdown * 100, -7.87, 0.10, "max drawdown %");
    c.expect_near(p.drawdown.calmar.value_or(-999), 1.88, 0.05, "calmar");
    c.expect_near(p.months.pct_winning, 100.0 * 48 / 72, 1e-9, "% winning months");
    c.expect_near(p.ratios.sharpe.value_or(-999), 1.16, 0.05, "sharpe");
    c.expect_near(p.ratios.sortino.value_or(-999), 2.97, 0.15, "sortino");
    c.expect_near(p.capm.beta, 0.18, 0.03, "beta");
    c.expect_near(p.capm.alpha_annualized * 100, 11.60, 0.50, "alpha annualized %");
    c.expect_near(p.ratios.information_ratio.value_or(-999), 2.80, 0.10, "information ratio");
    return c;
}

// ---- criterion 3: substituted property suite ----

Criterion criterion3() {
    Criterion c;
    c.name = "3: classification and exposure property suite";
    Rng rng(2025);

    // (a) confusion/ACC/PPV/NPV equal brute-force counting on 1000 series
    for (int series = 0; series < 1000 && c.pass; ++series) {
        const std::size_t n = 1 + rng.next_below(100);
        std::vector<int> preds(n), labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = rng.next_below(3);
            preds[i] = r == 0 ? +1 : (r == 1 ? -1 : 0);
            labels[i] = rng.next_double() < 0.5 ? +1 : -1;
        }
        std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (preds[i] == +1) (labels[i] == +1 ? tp : fp)++;
            if (preds[i] == -1) (labels[i] == -1 ? tn : fn)++;
        }
        const auto counts = confusion_counts(preds, labels);
        c.expect(counts.tp == tp && counts.fp == fp && counts.tn == tn && counts.fn == fn,
                 "confusion counts differ from brute force");
        if (counts.total() > 0) {
            const auto rates = classification_rates(counts);
            c.expect(std::abs(rates.accuracy - static_cast<double>(tp + tn) /
                                                   static_cast<double>(counts.total())) < 1e-15,
                     "accuracy differs from brute force");
            if (tp + fp > 0)
                c.expect(std::abs(*rates.ppv - static_cast<double>(tp) /
                                                   static_cast<double>(tp + fp)) < 1e-15,
                         "ppv differs from brute force");
            else
                c.expect(!rates.ppv.has_value(), "ppv should be absent");
            if (tn + fn > 0)
                c.expect(std::abs(*rates.npv - static_cast<double>(tn) /
                                                   static_cast<double>(tn + fn)) < 1e-15,
                         "npv differs from brute force");
            else
                c.expect(!rates.npv.has_value(), "npv should be absent");
        }
    }

    // (b) all-long predictions: ACC = positive-label fraction, NPV absent
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + rng.next_below(1500);
        std::vector<int> labels(n);
        std::size_t positives = 0;
        for (auto& l : labels) {
            l = rng.next_double() < 0.55 ? +1 : -1;
            positives += l > 0 ? 1 : 0;
        }
        const std::vector<int> all_long(n, +1);
        const auto rates = classification_rates(confusion_counts(all_long, labels));
        c.expect(std::abs(rates.accuracy -
                          static_cast<double>(positives) / static_cast<double>(n)) < 1e-15,
                 "all-long accuracy != positive fraction");
        c.expect(rates.ppv.has_value() && !rates.npv.has_value(),
                 "all-long must have PPV and no NPV");
    }

    // (c) exposure and contribution identities on randomized decisions
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng.next_below(400);
        std::vector<Decision> d(n);
        std::vector<double> r(n);
        double total = 0.0, long_sum = 0.0, short_sum = 0.0;
        std::size_t open_days = 0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i].direction = rng.next_double() < 0.5 ? +1 : -1;
            d[i].scale = rng.next_double() < 0.35 ? 0.0 : 1.0;
            r[i] = d[i].position() * 0.02 * rng.normal();
            total += r[i];
            if (d[i].open()) {
                ++open_days;
                (d[i].direction > 0 ? long_sum : short_sum) += r[i];
            }
        }
        const auto e = exposure_stats(d, r);
        c.expect(std::abs(e.pct_long_days + e.pct_short_days -
                          100.0 * static_cast<double>(open_days) / static_cast<double>(n)) <
                     1e-9,
                 "exposure percentages don't add up");
        c.expect(e.pct_long_days + e.pct_short_days <= 100.0 + 1e-9, "exposure above 100%");
        if (total != 0.0) {
            c.expect(std::abs(*e.long_contribution + *e.short_contribution - 100.0) < 1e-6,
                     "contributions don't sum to 100%");
            c.expect(std::abs(*e.long_contribution - 100.0 * long_sum / total) < 1e-6,
                     "long contribution wrong");
        } else {
            c.expect(!e.long_contribution.has_value(), "contribution must be absent");
        }
    }
    return c;
}

// ---- criterion 4: learner correctness ----

Criterion criterion4() {
    Criterion c;
    c.name = "4: learner correctness (gradients, loss trace, blobs, xor)";
    Rng rng(31337);

    // LSTM BPTT vs central differences, >= 10 random draws
    for (int draw = 0; draw < 10; ++draw) {
        const int hidden = 3 + static_cast<int>(rng.next_below(3));
        LstmParams p = LstmParams::init(3, hidden, rng);
        Matrix seq(4, 3);
        for (double& v : seq.data()) v = rng.normal();
        const double y01 = draw % 2 ? 1.0 : 0.0;

        LstmParams grad = LstmParams::zeros(3, hidden);
        lstm_backward(seq, y01, p, grad);
        const auto analytic = grad.to_flat();
        auto flat = p.to_flat();
        LstmParams probe = p;
        double worst = 0.0;
        const double eps = 1e-5;
        for (std::size_t i = 0; i < flat.size(); ++i) {
            const double keep = flat[i];
            auto loss_at = [&](double v) {
                flat[i] = v;
                probe.from_flat(flat);
                const double prob = lstm_forward(seq, probe);
                return -(y01 * std::log(prob) + (1.0 - y01) * std::log(1.0 - prob));
            };
            const double numeric = (loss_at(keep + eps) - loss_at(keep - eps)) / (2 * eps);
            flat[i] = keep;
            // 1e-6 floor: below it, central-difference cancellation noise
            // (~1e-11 absolute) would dominate the ratio
            const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
            worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
        }
        std::ostringstream os;
        os << "draw " << draw << ": max relative gradient error " << worst;
        c.expect(worst < 1e-4, os.str());
    }

    // blobs
    const auto make_blobs = [&](std::size_t n, Matrix& X, std::vector<int>& y) {
        X = Matrix(n, 4);
        y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int label = i % 2 == 0 ? +1 : -1;
            for (std::size_t f = 0; f < 4; ++f)
                X(i, f) = (label > 0 ? 2.0 : -2.0) + 0.6 * rng.normal();
            y[i] = label;
        }
    };
    Matrix X;
    std::vector<int> y;
    make_blobs(500, X, y);

    {
        const auto start = Clock::now();
        ForestConfig fc;
        fc.n_trees = 25;
        fc.tree = {8, 2, 2, 4242};
        const Forest f = Forest::fit(X, y, fc);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < X.rows(); ++i)
            if (f.predict(X.row(i)).direction == y[i]) ++hits;
        const double acc = static_cast<double>(hits) / static_cast<double>(X.rows());
        std::ostringstream os;
        os << "rf blob accuracy " << acc;
        c.expect(acc >= 0.95, os.str());
        c.expect(seconds_since(start) < 10.0, "rf blob fit must finish within 10s");
    }
    {
        const auto start = Clock::now();
        BoostConfig bc;
        bc.n_rounds = 50;
        bc.learning_rate = 0.1;
        bc.tree = {3, 2, 0, 99};
        const BoostedModel m = BoostedModel::fit(X, y, bc);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < X.rows(); ++i)
            if (m.predict(X.row(i)).direction == y[i]) ++hits;
        const double acc = static_cast<double>(hits) / static_cast<double>(X.rows());
        std::ostringstream os;
        os << "gbt blob accuracy " << acc;
        c.expect(acc >= 0.95, os.str());
        c.expect(seconds_since(start) < 10.0, "gbt blob fit must finish within 10s");

        const auto& trace = m.loss_trace();
        for (std::size_t i = 1; i < trace.size(); ++i)
            c.expect(trace[i] <= trace[i - 1] + 1e-12, "gbt loss increased in a round");
    }
    // loss trace on noise labels too
    {
        Matrix Xn(200, 3);
        std::vector<int> yn(200);
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t f = 0; f < 3; ++f) Xn(i, f) = rng.normal();
            yn[i] = rng.next_double() < 0.5 ? +1 : -1;
        }
        BoostConfig bc;
        bc.n_rounds = 40;
        bc.learning_rate = 1.0;
        bc.tree = {4, 2, 0, 5};
        const BoostedModel noise_model = BoostedModel::fit(Xn, yn, bc);
        const auto& trace = noise_model.loss_trace();
        for (std::size_t i = 1; i < trace.size(); ++i)
            c.expect(trace[i] <= trace[i - 1] + 1e-12, "gbt loss increased on noise data");
    }

    // depth-2 tree solves xor exactly
    {
        Matrix Xx(4, 2);
        Xx(0, 0) = 0; Xx(0, 1) = 0;
        Xx(1, 0) = 0; Xx(1, 1) = 1;
        Xx(2, 0) = 1; Xx(2, 1) = 0;
        Xx(3, 0) = 1; Xx(3, 1) = 1;
        const std::vector<int> yx = {-1, +1, +1, -1};
        const Tree t = Tree::fit_classifier(Xx, yx, {}, {2, 2, 0, 0});
        for (std::size_t i = 0; i < 4; ++i)
            c.expect(Tree::direction(t.predict(Xx.row(i))) == yx[i], "xor point misclassified");
    }
    return c;
}

// ---- criterion 5: harness invariants ----

Criterion criterion5() {
    Criterion c;
    c.name = "5: no-lookahead fuzz, parallel determinism, byte-identical reruns";
    const Dataset base = testing::make_synthetic_dataset(400, 404);
    const IndexRange train{0, 250};
    const std::size_t day = 320;

    LstmModelConfig lc;
    lc.net.epochs = 4;
    LstmModel lstm(lc);
    lstm.fit(base, train, 1, nullptr);
    GbtModelConfig gc;
    gc.boost.n_rounds = 8;
    GbtModel gbt(gc);
    gbt.fit(base, train, 2, nullptr);
    RfModelConfig rc;
    rc.n_trees = 7;
    RfModel rf(rc);
    rf.fit(base, train, 3, nullptr);
    ModelAConfig mc;
    mc.net_epochs = 8;
    ModelA modela(mc);
    modela.fit(base, train, 4, nullptr);
    PassiveModel passive;
    const std::vector<std::pair<std::string, const SignalModel*>> models = {
        {"passive", &passive}, {"lstm", &lstm}, {"gbt", &gbt}, {"rf", &rf},
        {"model_a", &modela}};

    Rng rng(808);
    for (const auto& [name, model] : models) {
        const Decision expected = model->decide(base, day);
        for (int trial = 0; trial < 100; ++trial) {
            Dataset mutated = base;
            // mutate one post-boundary field: day-t close/high/low/volume or
            // any field of a later day
            const std::size_t target = day + rng.next_below(mutated.size() - day);
            TradingDay& td = mutated.days[target];
            const double bump = 1.0 + 0.3 * rng.next_double();
            switch (rng.next_below(target == day ? 4 : 6)) {
                case 0: td.es.high *= bump; break;
                case 1: td.es.low /= bump; break;
                case 2:
                    td.es.close = std::min(std::max(td.es.close * bump, td.es.low), td.es.high);
                    td.daytime_return = daytime_return(td.es);
                    td.label = td.daytime_return > 0 ? +1 : -1;
                    break;
                case 3:
                    td.es.volume = td.es.volume.value() + 1 + rng.next_below(50000);
                    if (target + 1 < mutated.size())
                        mutated.days[target + 1].prev_volume = td.es.volume.value();
                    break;
                case 4: td.es.open = std::min(std::max(td.es.open * bump, td.es.low), td.es.high); break;
                case 5: td.vix.open = std::min(std::max(td.vix.open * bump, td.vix.low), td.vix.high); break;
            }
            if (!(model->decide(mutated, day) == expected)) {
                c.expect(false, name + ": decision changed after a future-field mutation");
                break;
            }
        }
    }

    // parallel vs sequential bit-identical signal series
    const Dataset ds = testing::make_synthetic_dataset(520, 505);
    const auto plan = plan_windows(ds.size(), 250, 50);
    const auto factory = [] {
        RfModelConfig cfg;
        cfg.n_trees = 9;
        return std::make_unique<RfModel>(cfg);
    };
    par::set_enabled(true);
    const auto parallel = run_walkforward(factory, ds, plan, 7, 0.0);
    par::set_enabled(false);
    const auto serial = run_walkforward(factory, ds, plan, 7, 0.0);
    par::set_enabled(true);
    c.expect(parallel == serial, "parallel and sequential signal series differ");

    // same-seed rerun is byte-identical end to end
    const fs::path work = fresh_dir("c5");
    const auto series = testing::make_synthetic_series(320, 1234);
    std::ofstream(work / "es.csv") << bars_to_csv(series.es, true);
    std::ofstream(work / "vix.csv") << bars_to_csv(series.vix, false);
    std::ofstream(work / "rates.csv") << rates_to_csv(series.rates);
    std::ofstream(work / "run.conf") << "es_csv = " << (work / "es.csv").string() << "\n"
                                     << "vix_csv = " << (work / "vix.csv").string() << "\n"
                                     << "rates_csv = " << (work / "rates.csv").string() << "\n"
                                     << "model = rf\nrf.n_trees = 9\nmaster_seed = 5\n";
    const int rc1 = run_cli("run --config " + (work / "run.conf").string() + " --out " +
                            (work / "o1").string());
    const int rc2 = run_cli("run --config " + (work / "run.conf").string() + " --out " +
                            (work / "o2").string());
    c.expect(rc1 == 0 && rc2 == 0, "rerun commands failed");
    for (const char* f : {"manifest.json", "signals.csv", "equity.csv", "monthly.csv",
                          "report.csv", "report.md", "hist.csv", "hist.svg", "equity.svg"})
        c.expect(slurp(work / "o1" / f) == slurp(work / "o2" / f),
                 std::string(f) + " differs between same-seed reruns");
    return c;
}

// ---- criterion 6: end-to-end smoke on 1509 synthetic days ----

Criterion criterion6() {
    Criterion c;
    c.name = "6: five-model end-to-end smoke on 1509 synthetic days";
    const auto start = Clock::now();
    const fs::path work = fresh_dir("c6");
    const auto series = testing::make_synthetic_series(1510, 20240101);
    std::ofstream(work / "es.csv") << bars_to_csv(series.es, true);
    std::ofstream(work / "vix.csv") << bars_to_csv(series.vix, false);
    std::ofstream(work / "rates.csv") << rates_to_csv(series.rates);

    const std::vector<std::string> model_ids = {"passive", "lstm", "gbt", "rf", "model_a"};
    std::vector<std::string> run_dirs;
    for (const auto& id : model_ids) {
        const fs::path conf = work / (id + ".conf");
        std::ofstream(conf) << "es_csv = " << (work / "es.csv").string() << "\n"
                            << "vix_csv = " << (work / "vix.csv").string() << "\n"
                            << "rates_csv = " << (work / "rates.csv").string() << "\n"
                            << "model = " << id << "\nmaster_seed = 11\n";
        const fs::path out = work / ("run_" + id);
        const int rc = run_cli("run --config " + conf.string() + " --out " + out.string());
        c.expect(rc == 0, id + " run exited with " + std::to_string(rc));
        for (const char* f : {"manifest.json", "signals.csv", "equity.csv", "monthly.csv",
                              "report.csv", "report.md", "hist.csv", "hist.svg", "equity.svg"})
            c.expect(fs::exists(out / f), id + " bundle is missing " + f);
        run_dirs.push_back(out.string());
    }

    // exposure: binary models fully invested, model_a strictly below 100%
    for (const auto& id : model_ids) {
        const auto cols = parse_report_csv(slurp(fs::path(work / ("run_" + id)) / "report.csv"));
        const auto* col = find_column(cols, id);
        if (!col || !col->exposure) {
            c.expect(false, id + ": no exposure stats in report.csv");
            continue;
        }
        const double total = col->exposure->pct_long_days + col->exposure->pct_short_days;
        if (id == "model_a")
            c.expect(total < 100.0, "model_a exposure must stay below 100%, got " +
                                        std::to_string(total));
        else
            c.expect(std::abs(total - 100.0) < 1e-9,
                     id + " exposure must be 100%, got " + std::to_string(total));
    }

    std::string compare_args = "compare";
    for (const auto& d : run_dirs) compare_args += " " + d;
    compare_args += " --out " + (work / "cmp").string();
    c.expect(run_cli(compare_args) == 0, "compare across the five runs failed");
    c.expect(fs::exists(work / "cmp" / "compare.md"), "compare.md missing");

    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "smoke wall time " << elapsed << "s (budget 300s)";
    c.expect(elapsed < 300.0, os.str());
    c.notes.push_back("wall time " + std::to_string(elapsed) + "s");
    return c;
}

} // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion1());
    results.push_back(criterion2());
    results.push_back(criterion3());
    results.push_back(criterion4());
    results.push_back(criterion5());
    results.push_back(criterion6());

    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.name << "\n";
        for (const auto& note : r.notes) std::cout << "       - " << note << "\n";
        if (!r.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
