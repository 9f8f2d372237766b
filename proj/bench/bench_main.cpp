// Benchmark of the OpenMP-parallel kernels against the serial reference
// path. Both paths are bit-identical by construction; this target measures
// the speedup and re-verifies the equality on each workload.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "daybt/backtest.hpp"
#include "daybt/learners/forest.hpp"
#include "daybt/learners/lstm.hpp"
#include "daybt/parallel.hpp"
#include "daybt/rng.hpp"
#include "daybt/signals/models.hpp"
#include "../tests/test_support.hpp"

using namespace daybt;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_it(const F& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %5.2fx   %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", par::max_threads());

    // forest fit
    {
        Rng rng(1);
        const std::size_t n = 2000;
        Matrix X(n, 12);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < 12; ++c) X(i, c) = rng.normal();
            y[i] = X(i, 0) + 0.3 * rng.normal() > 0 ? +1 : -1;
        }
        ForestConfig fc;
        fc.n_trees = 48;
        fc.tree = {10, 2, 3, 7};
        std::string serial_bytes, parallel_bytes;
        par::set_enabled(false);
        const double ts = time_it([&] { serial_bytes = Forest::fit(X, y, fc).serialize(); });
        par::set_enabled(true);
        const double tp = time_it([&] { parallel_bytes = Forest::fit(X, y, fc).serialize(); });
        report("forest fit (48 trees)", ts, tp, serial_bytes == parallel_bytes);
    }

    // lstm fit
    {
        Rng rng(2);
        std::vector<Matrix> seqs;
        std::vector<int> labels;
        for (int i = 0; i < 250; ++i) {
            Matrix m(20, 3);
            for (double& v : m.data()) v = rng.normal();
            seqs.push_back(std::move(m));
            labels.push_back(rng.next_double() < 0.5 ? +1 : -1);
        }
        LstmConfig cfg;
        cfg.epochs = 20;
        cfg.learning_rate = 0.05;
        cfg.rng_seed = 3;
        LstmParams a, b;
        par::set_enabled(false);
        const double ts = time_it([&] { a = lstm_fit(seqs, labels, cfg); }, 2);
        par::set_enabled(true);
        const double tp = time_it([&] { b = lstm_fit(seqs, labels, cfg); }, 2);
        report("lstm fit (250x20x3, 20 ep)", ts, tp, a == b);
    }

    // walk-forward fan-out
    {
        const Dataset ds = testing::make_synthetic_dataset(1000, 3);
        const auto plan = plan_windows(ds.size(), 250, 50);
        const auto factory = [] {
            RfModelConfig c;
            c.n_trees = 16;
            return std::make_unique<RfModel>(c);
        };
        SignalSeries a, b;
        par::set_enabled(false);
        const double ts = time_it([&] { a = run_walkforward(factory, ds, plan, 11, 0.0); }, 2);
        par::set_enabled(true);
        const double tp = time_it([&] { b = run_walkforward(factory, ds, plan, 11, 0.0); }, 2);
        report("walk-forward (15 windows)", ts, tp, a == b);
    }

    return 0;
}
