#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "daybt/data.hpp"
#include "daybt/decision.hpp"
#include "daybt/metrics.hpp"
#include "daybt/signals/models.hpp"

namespace daybt {

struct WalkForwardPlan {
    std::size_t train_window = 250;
    std::size_t test_window = 50;

    struct Window {
        IndexRange train;
        IndexRange test;
    };
    std::vector<Window> windows;
};

// Rolling windows: the first test index is train_window, windows advance by
// test_window, each train range is the train_window days immediately before
// its test range, and a final partial test window is kept.
WalkForwardPlan plan_windows(std::size_t n_days, std::size_t train_window,
                             std::size_t test_window);

struct SignalPoint {
    Date date;
    Decision decision;
    double strategy_return = 0.0;

    bool operator==(const SignalPoint&) const = default;
};

using SignalSeries = std::vector<SignalPoint>;

using ModelFactory = std::function<std::unique_ptr<SignalModel>()>;

// Fits a fresh model per window with seed derive_seed(master_seed, window
// index) and concatenates the test-day decisions. Sequential models receive
// the previous window's model as prior state and force window order; other
// models fan out across windows. A day with an open position pays the
// per-side cost twice (open and close).
SignalSeries run_walkforward(const ModelFactory& factory, const Dataset& ds,
                             const WalkForwardPlan& plan, std::uint64_t master_seed,
                             double cost_per_side = 0.0);

struct EquityPoint {
    Date date;
    double value = 0.0;

    bool operator==(const EquityPoint&) const = default;
};

// Cumulative product from 1.0. Throws DataError on any return <= -1.
std::vector<EquityPoint> equity_curve(const ReturnSeries& returns);

// Per-window seeds as they will be used by run_walkforward (for manifests).
std::vector<std::uint64_t> window_seeds(const WalkForwardPlan& plan, std::uint64_t master_seed);

} // namespace daybt
