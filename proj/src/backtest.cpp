#include "daybt/backtest.hpp"

#include "daybt/errors.hpp"
#include "daybt/parallel.hpp"
#include "daybt/rng.hpp"

namespace daybt {

WalkForwardPlan plan_windows(std::size_t n_days, std::size_t train_window,
                             std::size_t test_window) {
    if (n_days <= train_window)
        throw DataError("plan_windows: need more than " + std::to_string(train_window) +
                        " days, got " + std::to_string(n_days));
    if (train_window == 0 || test_window == 0)
        throw DataError("plan_windows: zero-length window");
    WalkForwardPlan plan;
    plan.train_window = train_window;
    plan.test_window = test_window;
    for (std::size_t start = train_window; start < n_days; start += test_window) {
        WalkForwardPlan::Window w;
        w.train = {start - train_window, start};
        w.test = {start, std::min(n_days, start + test_window)};
        plan.windows.push_back(w);
    }
    return plan;
}

std::vector<std::uint64_t> window_seeds(const WalkForwardPlan& plan, std::uint64_t master_seed) {
    std::vector<std::uint64_t> seeds(plan.windows.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_seed(master_seed, i);
    return seeds;
}

namespace {

double realized_return(const Decision& d, double daytime_return, double cost_per_side) {
    double r = d.position() * daytime_return;
    if (d.open()) r -= 2.0 * cost_per_side; // open and close the position
    return r;
}

} // namespace

SignalSeries run_walkforward(const ModelFactory& factory, const Dataset& ds,
                             const WalkForwardPlan& plan, std::uint64_t master_seed,
                             double cost_per_side) {
    if (plan.windows.empty()) throw DataError("run_walkforward: empty plan");
    if (plan.windows.back().test.end > ds.size())
        throw DataError("run_walkforward: plan extends past the dataset");

    const auto seeds = window_seeds(plan, master_seed);
    std::vector<SignalSeries> per_window(plan.windows.size());

    auto run_window = [&](std::size_t i, SignalModel& model) {
        const auto& w = plan.windows[i];
        SignalSeries out;
        out.reserve(w.test.size());
        for (std::size_t t = w.test.begin; t < w.test.end; ++t) {
            const Decision d = model.decide(ds, t);
            out.push_back({ds[t].date, d, realized_return(d, ds[t].daytime_return, cost_per_side)});
        }
        return out;
    };

    const bool sequential = factory()->sequential();
    if (sequential) {
        std::unique_ptr<SignalModel> prev;
        for (std::size_t i = 0; i < plan.windows.size(); ++i) {
            auto model = factory();
            try {
                model->fit(ds, plan.windows[i].train, seeds[i], prev.get());
            } catch (const ModelError& e) {
                throw ModelError("window " + std::to_string(i) + ": " + e.what());
            }
            per_window[i] = run_window(i, *model);
            prev = std::move(model);
        }
    } else {
        std::vector<std::string> failures(plan.windows.size());
        par::parallel_for(plan.windows.size(), [&](std::size_t i) {
            auto model = factory();
            try {
                model->fit(ds, plan.windows[i].train, seeds[i], nullptr);
                per_window[i] = run_window(i, *model);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < failures.size(); ++i)
            if (!failures[i].empty())
                throw ModelError("window " + std::to_string(i) + ": " + failures[i]);
    }

    SignalSeries series;
    for (const auto& w : per_window) series.insert(series.end(), w.begin(), w.end());
    return series;
}

std::vector<EquityPoint> equity_curve(const ReturnSeries& returns) {
    std::vector<EquityPoint> curve;
    curve.reserve(returns.size());
    double value = 1.0;
    for (const auto& [date, r] : returns) {
        if (r <= -1.0)
            throw DataError("equity_curve: return <= -100% on " + date.iso());
        value *= 1.0 + r;
        curve.push_back({date, value});
    }
    return curve;
}

} // namespace daybt
