#include "daybt/signals/model_a.hpp"

#include <algorithm>
#include <cmath>

#include "daybt/errors.hpp"

namespace daybt {

namespace {

constexpr std::size_t kMinTrainSamples = 20;

ZScoreParams column_stats(const Matrix& X) {
    ZScoreParams p;
    p.mean.assign(X.cols(), 0.0);
    p.std_dev.assign(X.cols(), 0.0);
    const double n = static_cast<double>(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) p.mean[c] += X(r, c);
    for (double& m : p.mean) m /= n;
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) {
            const double d = X(r, c) - p.mean[c];
            p.std_dev[c] += d * d;
        }
    for (double& s : p.std_dev) s = std::sqrt(s / n);
    return p;
}

void apply_stats(Matrix& X, const ZScoreParams& stats) {
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) X(r, c) = stats.apply(c, X(r, c));
}

double confidence(double p) { return std::abs(2.0 * p - 1.0); }

} // namespace

Decision gate_decision(double p_net, double p_tree, double theta) {
    const int d_net = p_net > 0.5 ? +1 : -1;
    const int d_tree = p_tree > 0.5 ? +1 : -1;
    const double combined = 0.5 * (confidence(p_net) + confidence(p_tree));
    if (d_net == d_tree && combined >= theta) return {d_net, 1.0};
    return {d_net, 0.0};
}

void ModelA::fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
                 const SignalModel* prev) {
    const auto first_usable = static_cast<std::size_t>(
        std::max(cfg_.net_lookback, cfg_.tree_lookback));
    const auto usable = usable_train_indices(train, first_usable);
    if (usable.size() < kMinTrainSamples)
        throw ModelError("model_a: only " + std::to_string(usable.size()) +
                         " usable training days");

    // agent 1: feedforward net on the flattened lookback block
    const std::size_t net_dim = 9 * static_cast<std::size_t>(cfg_.net_lookback) + 2;
    Matrix Xn(usable.size(), net_dim);
    std::vector<int> labels(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto row = build_tree_features(ds, usable[i], cfg_.net_lookback);
        std::copy(row.begin(), row.end(), Xn.row(i));
        labels[i] = ds[usable[i]].label;
    }
    state_.net_stats = column_stats(Xn);
    apply_stats(Xn, state_.net_stats);

    const auto* prior = dynamic_cast<const ModelA*>(prev);
    if (prior && prior->state_.fitted) {
        state_.net = mlp_fit_from(prior->state_.net, Xn, labels, cfg_.net_refit_epochs,
                                  cfg_.net_learning_rate);
    } else {
        state_.net = mlp_fit(Xn, labels, cfg_.net_hidden1, cfg_.net_hidden2, cfg_.net_epochs,
                             cfg_.net_learning_rate, seed);
    }

    // agent 2: CART over the 20-day close sequence
    const std::size_t tree_dim = 2 * static_cast<std::size_t>(cfg_.tree_lookback) + 2;
    Matrix Xt(usable.size(), tree_dim);
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto row = build_seq_close_features(ds, usable[i], cfg_.tree_lookback);
        std::copy(row.begin(), row.end(), Xt.row(i));
    }
    TreeConfig tc;
    tc.max_depth = cfg_.tree_max_depth;
    tc.min_samples_split = cfg_.tree_min_samples_split;
    tc.features_per_split = 0;
    tc.rng_seed = derive_seed(seed, 0x7265656eULL);
    state_.tree = Tree::fit_classifier(Xt, labels, {}, tc);

    // action policy: replay the gated policy over the training slice and
    // pick the theta with the best trailing risk-adjusted reward
    std::vector<double> p_net(usable.size()), p_tree(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        p_net[i] = mlp_forward(Xn.row(i), state_.net);
        p_tree[i] = state_.tree.predict(Xt.row(i));
    }
    const std::size_t window = std::min<std::size_t>(
        usable.size(), static_cast<std::size_t>(cfg_.reward_window));
    double best_score = 0.0;
    double best_theta = 0.0;
    bool have_best = false;
    for (double theta : cfg_.theta_grid) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = usable.size() - window; i < usable.size(); ++i) {
            const Decision d = gate_decision(p_net[i], p_tree[i], theta);
            const double reward = d.position() * ds[usable[i]].daytime_return;
            sum += reward;
            sumsq += reward * reward;
        }
        const double mean = sum / static_cast<double>(window);
        const double var = sumsq / static_cast<double>(window) - mean * mean;
        const double stddev = var > 0.0 ? std::sqrt(var) : 0.0;
        double score;
        if (stddev > 0.0) score = mean / stddev;
        else if (mean > 0.0) score = 1e300;
        else if (mean < 0.0) score = -1e300;
        else score = 0.0;
        if (!have_best || score > best_score) { // ties keep the smaller theta
            best_score = score;
            best_theta = theta;
            have_best = true;
        }
    }
    state_.theta = best_theta;
    state_.fitted = true;
}

AgentOpinions ModelA::opinions(const Dataset& ds, std::size_t t) const {
    if (!state_.fitted) throw ModelError("model_a: decide before fit");
    auto net_row = build_tree_features(ds, t, cfg_.net_lookback);
    for (std::size_t c = 0; c < net_row.size(); ++c)
        net_row[c] = state_.net_stats.apply(c, net_row[c]);
    const auto tree_row = build_seq_close_features(ds, t, cfg_.tree_lookback);
    return {mlp_forward(net_row.data(), state_.net), state_.tree.predict(tree_row.data())};
}

Decision ModelA::decide(const Dataset& ds, std::size_t t) const {
    const AgentOpinions o = opinions(ds, t);
    return gate_decision(o.p_net, o.p_tree, state_.theta);
}

} // namespace daybt
