#include "daybt/signals/models.hpp"

#include <cmath>

#include "daybt/errors.hpp"

namespace daybt {

namespace {
constexpr std::size_t kMinTrainSamples = 20;
}

std::vector<std::size_t> usable_train_indices(IndexRange train, std::size_t first_usable) {
    std::vector<std::size_t> idx;
    for (std::size_t t = std::max(train.begin, first_usable); t < train.end; ++t)
        idx.push_back(t);
    return idx;
}

// ---- LSTM ----

void LstmModel::fit(const Dataset& ds, IndexRange train, std::uint64_t seed, const SignalModel*) {
    const auto seq = static_cast<std::size_t>(cfg_.net.sequence_length);
    const auto usable = usable_train_indices(train, seq - 1);
    if (usable.size() < kMinTrainSamples)
        throw ModelError("lstm model: only " + std::to_string(usable.size()) +
                         " usable training days");
    stats_ = lstm_feature_stats(ds, train.begin, train.end);
    std::vector<Matrix> sequences;
    std::vector<int> labels;
    sequences.reserve(usable.size());
    labels.reserve(usable.size());
    for (std::size_t t : usable) {
        sequences.push_back(build_lstm_features(ds, t, cfg_.net.sequence_length, stats_));
        labels.push_back(ds[t].label);
    }
    LstmConfig net = cfg_.net;
    net.rng_seed = seed;
    params_ = lstm_fit(sequences, labels, net);
    fitted_ = true;
}

Decision LstmModel::decide(const Dataset& ds, std::size_t t) const {
    if (!fitted_) throw ModelError("lstm model: decide before fit");
    const Matrix x = build_lstm_features(ds, t, cfg_.net.sequence_length, stats_);
    const double p = lstm_forward(x, params_);
    return {p > 0.5 ? +1 : -1, 1.0};
}

// ---- GBT ----

void GbtModel::fit(const Dataset& ds, IndexRange train, std::uint64_t seed, const SignalModel*) {
    const auto lb = static_cast<std::size_t>(cfg_.features.lookback);
    const auto usable = usable_train_indices(train, lb);
    if (usable.size() < kMinTrainSamples)
        throw ModelError("gbt model: only " + std::to_string(usable.size()) +
                         " usable training days");
    const std::size_t d = 9 * lb + 2;
    Matrix X(usable.size(), d);
    std::vector<int> y(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto row =
            build_tree_features(ds, usable[i], cfg_.features.lookback, cfg_.features.raw_prices);
        std::copy(row.begin(), row.end(), X.row(i));
        y[i] = ds[usable[i]].label;
    }
    BoostConfig boost = cfg_.boost;
    boost.tree.rng_seed = seed;
    model_ = BoostedModel::fit(X, y, boost);
    fitted_ = true;
}

Decision GbtModel::decide(const Dataset& ds, std::size_t t) const {
    if (!fitted_) throw ModelError("gbt model: decide before fit");
    const auto x = build_tree_features(ds, t, cfg_.features.lookback, cfg_.features.raw_prices);
    return {model_.predict(x).direction, 1.0};
}

// ---- RF ----

void RfModel::fit(const Dataset& ds, IndexRange train, std::uint64_t seed, const SignalModel*) {
    const auto lb = static_cast<std::size_t>(cfg_.features.lookback);
    const auto usable = usable_train_indices(train, lb);
    if (usable.size() < kMinTrainSamples)
        throw ModelError("rf model: only " + std::to_string(usable.size()) +
                         " usable training days");
    const std::size_t d = 9 * lb + 2;
    Matrix X(usable.size(), d);
    std::vector<int> y(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto row =
            build_tree_features(ds, usable[i], cfg_.features.lookback, cfg_.features.raw_prices);
        std::copy(row.begin(), row.end(), X.row(i));
        y[i] = ds[usable[i]].label;
    }
    ForestConfig fc;
    fc.n_trees = cfg_.n_trees;
    fc.bootstrap = cfg_.bootstrap;
    fc.tree.max_depth = cfg_.max_depth;
    fc.tree.min_samples_split = cfg_.min_samples_split;
    fc.tree.features_per_split =
        cfg_.features_per_split < 0
            ? static_cast<int>(std::floor(std::sqrt(static_cast<double>(d))))
            : cfg_.features_per_split;
    fc.tree.rng_seed = seed;
    forest_ = Forest::fit(X, y, fc);
    fitted_ = true;
}

Decision RfModel::decide(const Dataset& ds, std::size_t t) const {
    if (!fitted_) throw ModelError("rf model: decide before fit");
    const auto x = build_tree_features(ds, t, cfg_.features.lookback, cfg_.features.raw_prices);
    return {forest_.predict(x).direction, 1.0};
}

} // namespace daybt
