#include "daybt/signals/features.hpp"

#include <cmath>

#include "daybt/errors.hpp"

namespace daybt {

namespace {

void require_history(std::size_t t, std::size_t need, const char* what) {
    if (t < need)
        throw ModelError(std::string(what) + ": insufficient history at index " +
                         std::to_string(t) + " (need " + std::to_string(need) + " prior days)");
}

double log_ratio(double num, double den) {
    if (!(num > 0.0) || !(den > 0.0)) throw ModelError("log-ratio feature on nonpositive price");
    return std::log(num / den);
}

} // namespace

ZScoreParams lstm_feature_stats(const Dataset& ds, std::size_t begin, std::size_t end) {
    if (begin >= end || end > ds.size()) throw ModelError("feature stats: bad training slice");
    ZScoreParams p;
    p.mean.assign(3, 0.0);
    p.std_dev.assign(3, 0.0);
    const double n = static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        p.mean[0] += ds[i].es.open;
        p.mean[1] += ds[i].vix.open;
        p.mean[2] += static_cast<double>(ds[i].prev_volume);
    }
    for (double& m : p.mean) m /= n;
    for (std::size_t i = begin; i < end; ++i) {
        const double d0 = ds[i].es.open - p.mean[0];
        const double d1 = ds[i].vix.open - p.mean[1];
        const double d2 = static_cast<double>(ds[i].prev_volume) - p.mean[2];
        p.std_dev[0] += d0 * d0;
        p.std_dev[1] += d1 * d1;
        p.std_dev[2] += d2 * d2;
    }
    for (double& s : p.std_dev) s = std::sqrt(s / n);
    return p;
}

Matrix build_lstm_features(const Dataset& ds, std::size_t t, int seq_len,
                           const ZScoreParams& stats) {
    const auto len = static_cast<std::size_t>(seq_len);
    require_history(t, len - 1, "lstm features");
    if (t >= ds.size()) throw ModelError("lstm features: index out of range");
    Matrix m(len, 3);
    for (std::size_t r = 0; r < len; ++r) {
        const std::size_t d = t - (len - 1) + r;
        m(r, 0) = stats.apply(0, ds[d].es.open);
        m(r, 1) = stats.apply(1, ds[d].vix.open);
        m(r, 2) = stats.apply(2, static_cast<double>(ds[d].prev_volume));
    }
    return m;
}

std::vector<double> build_tree_features(const Dataset& ds, std::size_t t, int lookback,
                                        bool raw_prices) {
    const auto lb = static_cast<std::size_t>(lookback);
    require_history(t, lb, "tree features");
    if (t >= ds.size()) throw ModelError("tree features: index out of range");

    double mean_vol = 0.0;
    for (std::size_t d = t - lb; d < t; ++d)
        mean_vol += static_cast<double>(ds[d].es.volume.value_or(0));
    mean_vol /= static_cast<double>(lb);

    const double es_ref = ds[t].es.open;
    const double vix_ref = ds[t].vix.open;
    std::vector<double> out;
    out.reserve(9 * lb + 2);
    for (std::size_t d = t - lb; d < t; ++d) {
        const Bar& es = ds[d].es;
        const Bar& vix = ds[d].vix;
        const double vol = static_cast<double>(es.volume.value_or(0));
        if (raw_prices) {
            out.insert(out.end(), {es.open, es.high, es.low, es.close, vol, vix.open, vix.high,
                                   vix.low, vix.close});
        } else {
            out.push_back(log_ratio(es.open, es_ref));
            out.push_back(log_ratio(es.high, es_ref));
            out.push_back(log_ratio(es.low, es_ref));
            out.push_back(log_ratio(es.close, es_ref));
            out.push_back(std::log((vol + 1.0) / (mean_vol + 1.0)));
            out.push_back(log_ratio(vix.open, vix_ref));
            out.push_back(log_ratio(vix.high, vix_ref));
            out.push_back(log_ratio(vix.low, vix_ref));
            out.push_back(log_ratio(vix.close, vix_ref));
        }
    }
    if (raw_prices) {
        out.push_back(es_ref);
        out.push_back(vix_ref);
    } else {
        out.push_back(log_ratio(es_ref, ds[t - 1].es.close));
        out.push_back(log_ratio(vix_ref, ds[t - 1].vix.close));
    }
    return out;
}

std::vector<double> build_seq_close_features(const Dataset& ds, std::size_t t, int lookback) {
    const auto lb = static_cast<std::size_t>(lookback);
    require_history(t, lb, "sequence features");
    if (t >= ds.size()) throw ModelError("sequence features: index out of range");
    const double es_ref = ds[t].es.open;
    const double vix_ref = ds[t].vix.open;
    std::vector<double> out;
    out.reserve(2 * lb + 2);
    for (std::size_t d = t - lb; d < t; ++d) {
        out.push_back(log_ratio(ds[d].es.close, es_ref));
        out.push_back(log_ratio(ds[d].vix.close, vix_ref));
    }
    out.push_back(log_ratio(es_ref, ds[t - 1].es.close));
    out.push_back(log_ratio(vix_ref, ds[t - 1].vix.close));
    return out;
}

} // namespace daybt
