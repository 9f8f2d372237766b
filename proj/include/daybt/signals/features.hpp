#pragma once

#include <cstddef>
#include <vector>

#include "daybt/data.hpp"
#include "daybt/learners/matrix.hpp"

namespace daybt {

// Per-column normalization fitted on a training slice only.
struct ZScoreParams {
    std::vector<double> mean;
    std::vector<double> std_dev; // 0 marks a zero-variance column (emits 0)

    double apply(std::size_t col, double x) const {
        return std_dev[col] > 0.0 ? (x - mean[col]) / std_dev[col] : 0.0;
    }
};

// Statistics of the recurrent-model input triple (ES open, VIX open,
// previous-day ES volume) over dataset indices [begin, end).
ZScoreParams lstm_feature_stats(const Dataset& ds, std::size_t begin, std::size_t end);

// seq_len x 3 matrix for decision day t: row d in [t-seq_len+1, t] carries
// (ES open_d, VIX open_d, ES volume_{d-1}), z-scored with training stats.
// Reads nothing of day t beyond its two opens. Requires t >= seq_len - 1.
Matrix build_lstm_features(const Dataset& ds, std::size_t t, int seq_len,
                           const ZScoreParams& stats);

// Flattened lookback block for tree models, dimension 9L + 2: for each of
// the L days before t (oldest first), ES open/high/low/close as log-ratios
// to day-t ES open, ES volume as a log-ratio to the block's mean volume,
// and VIX open/high/low/close as log-ratios to day-t VIX open; then day-t
// ES open and VIX open as log-ratios to the previous day's closes.
// raw_prices switches to untransformed values (ablation mode).
std::vector<double> build_tree_features(const Dataset& ds, std::size_t t, int lookback,
                                        bool raw_prices = false);

// Reduced 20-day-sequence block for the tree agent: per lagged day only the
// ES and VIX closes (log-ratios to day-t opens), plus the two day-t open
// ratios. Dimension 2L + 2.
std::vector<double> build_seq_close_features(const Dataset& ds, std::size_t t, int lookback);

} // namespace daybt
