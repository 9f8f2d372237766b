#include "daybt/learners/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "daybt/errors.hpp"
#include "daybt/rng.hpp"

namespace daybt {

namespace {

// For 0/1 targets the weighted within-node variance sum is exactly half the
// weighted Gini sum, so one split criterion serves both fit modes.
struct SplitSearch {
    const Matrix& X;
    const std::vector<double>& t; // targets (y01 for classification)
    const std::vector<double>& w;

    struct Best {
        double cost = std::numeric_limits<double>::infinity();
        int feature = -1;
        double threshold = 0.0;
        bool found = false;
    };

    Best best_split(const std::vector<int>& idx, const std::vector<int>& features) const {
        Best best;
        std::vector<std::pair<double, int>> order(idx.size());
        for (int f : features) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                order[i] = {X(static_cast<std::size_t>(idx[i]), static_cast<std::size_t>(f)),
                            idx[i]};
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double s0 = 0.0, s1 = 0.0, s2 = 0.0; // left prefix: w, w*t, w*t^2
            double tot0 = 0.0, tot1 = 0.0, tot2 = 0.0;
            for (const auto& [v, i] : order) {
                const double wi = w[static_cast<std::size_t>(i)];
                const double ti = t[static_cast<std::size_t>(i)];
                tot0 += wi;
                tot1 += wi * ti;
                tot2 += wi * ti * ti;
            }
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const double wi = w[static_cast<std::size_t>(order[i].second)];
                const double ti = t[static_cast<std::size_t>(order[i].second)];
                s0 += wi;
                s1 += wi * ti;
                s2 += wi * ti * ti;
                if (order[i].first == order[i + 1].first) continue; // not a boundary
                double mid = 0.5 * (order[i].first + order[i + 1].first);
                if (mid >= order[i + 1].first) mid = order[i].first; // fp-rounding guard
                const double r0 = tot0 - s0, r1 = tot1 - s1, r2 = tot2 - s2;
                if (s0 <= 0.0 || r0 <= 0.0) continue; // zero-weight side
                const double cost = (s2 - s1 * s1 / s0) + (r2 - r1 * r1 / r0);
                if (cost < best.cost ||
                    (cost == best.cost && best.found &&
                     (f < best.feature || (f == best.feature && mid < best.threshold)))) {
                    best = {cost, f, mid, true};
                }
            }
        }
        return best;
    }
};

struct Builder {
    const Matrix& X;
    const std::vector<double>& targets;
    const std::vector<double>& weights;
    const TreeConfig& cfg;
    const Tree::LeafValueFn& leaf_value;
    Rng rng;
    std::vector<TreeNode> nodes;

    int make_leaf(const std::vector<int>& idx) {
        TreeNode node;
        if (leaf_value) {
            node.value = leaf_value(idx);
        } else {
            double s0 = 0.0, s1 = 0.0;
            for (int i : idx) {
                s0 += weights[static_cast<std::size_t>(i)];
                s1 += weights[static_cast<std::size_t>(i)] * targets[static_cast<std::size_t>(i)];
            }
            node.value = s0 > 0.0 ? s1 / s0 : 0.0;
        }
        nodes.push_back(node);
        return static_cast<int>(nodes.size()) - 1;
    }

    std::vector<int> pick_features() {
        const int d = static_cast<int>(X.cols());
        if (cfg.features_per_split <= 0 || cfg.features_per_split >= d) {
            std::vector<int> all(static_cast<std::size_t>(d));
            for (int f = 0; f < d; ++f) all[static_cast<std::size_t>(f)] = f;
            return all;
        }
        // partial Fisher-Yates, then ascending order so the tie-break rule
        // (lowest feature index) is independent of sampling order
        std::vector<int> pool(static_cast<std::size_t>(d));
        for (int f = 0; f < d; ++f) pool[static_cast<std::size_t>(f)] = f;
        const int k = cfg.features_per_split;
        for (int i = 0; i < k; ++i) {
            const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        pool.resize(static_cast<std::size_t>(k));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    bool pure(const std::vector<int>& idx) const {
        const double first = targets[static_cast<std::size_t>(idx[0])];
        for (int i : idx)
            if (targets[static_cast<std::size_t>(i)] != first) return false;
        return true;
    }

    int build(const std::vector<int>& idx, int depth) {
        if (depth >= cfg.max_depth || idx.size() < static_cast<std::size_t>(cfg.min_samples_split) ||
            pure(idx))
            return make_leaf(idx);

        const auto features = pick_features();
        const auto best = SplitSearch{X, targets, weights}.best_split(idx, features);
        if (!best.found) return make_leaf(idx); // all candidates constant

        std::vector<int> left, right;
        left.reserve(idx.size());
        right.reserve(idx.size());
        for (int i : idx) {
            if (X(static_cast<std::size_t>(i), static_cast<std::size_t>(best.feature)) <=
                best.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }

        const int self = static_cast<int>(nodes.size());
        nodes.push_back({best.feature, best.threshold, -1, -1, 0.0});
        const int l = build(left, depth + 1);
        const int r = build(right, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = l;
        nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }
};

Tree fit_impl(const Matrix& X, const std::vector<double>& targets,
              const std::vector<double>& weights, const TreeConfig& cfg,
              const Tree::LeafValueFn& leaf_value);

} // namespace

Tree Tree::fit_classifier(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& weights, const TreeConfig& cfg) {
    if (y.size() != X.rows()) throw ModelError("tree fit: label count != row count");
    std::vector<double> y01(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y01[i] = y[i] > 0 ? 1.0 : 0.0;
    std::vector<double> w = weights;
    if (w.empty()) w.assign(X.rows(), 1.0);
    return fit_impl(X, y01, w, cfg, {});
}

Tree Tree::fit_regression(const Matrix& X, const std::vector<double>& targets,
                          const TreeConfig& cfg, const LeafValueFn& leaf_value) {
    if (targets.size() != X.rows()) throw ModelError("tree fit: target count != row count");
    const std::vector<double> unit(X.rows(), 1.0);
    return fit_impl(X, targets, unit, cfg, leaf_value);
}

namespace {

Tree fit_impl(const Matrix& X, const std::vector<double>& targets,
              const std::vector<double>& weights, const TreeConfig& cfg,
              const Tree::LeafValueFn& leaf_value) {
    if (X.rows() == 0) throw ModelError("tree fit: empty input");
    if (cfg.max_depth < 1) throw ModelError("tree fit: max_depth must be >= 1");
    if (cfg.min_samples_split < 2) throw ModelError("tree fit: min_samples_split must be >= 2");
    for (double v : X.data())
        if (std::isnan(v)) throw ModelError("tree fit: NaN feature value");
    std::vector<int> idx(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) idx[i] = static_cast<int>(i);
    Builder b{X, targets, weights, cfg, leaf_value, Rng(cfg.rng_seed), {}};
    b.nodes.reserve(2 * X.rows());
    b.build(idx, 0);
    return Tree::from_nodes(std::move(b.nodes));
}

} // namespace

double Tree::predict(const double* x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
        const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
        i = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
}

int Tree::depth() const {
    // preorder layout: walk with explicit depths
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        const auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
        if (n.feature >= 0) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return deepest;
}

std::string Tree::serialize() const {
    std::string out = "tree " + std::to_string(nodes_.size()) + "\n";
    char buf[128];
    for (const TreeNode& n : nodes_) {
        std::snprintf(buf, sizeof buf, "%d %.17g %d %d %.17g\n", n.feature, n.threshold, n.left,
                      n.right, n.value);
        out += buf;
    }
    return out;
}

Tree Tree::deserialize_lines(const std::vector<std::string>& lines, std::size_t& pos) {
    if (pos >= lines.size()) throw ModelError("tree deserialize: truncated input");
    std::size_t count = 0;
    if (std::sscanf(lines[pos].c_str(), "tree %zu", &count) != 1)
        throw ModelError("tree deserialize: bad header '" + lines[pos] + "'");
    ++pos;
    Tree t;
    t.nodes_.resize(count);
    for (std::size_t i = 0; i < count; ++i, ++pos) {
        if (pos >= lines.size()) throw ModelError("tree deserialize: truncated nodes");
        TreeNode& n = t.nodes_[i];
        if (std::sscanf(lines[pos].c_str(), "%d %lg %d %d %lg", &n.feature, &n.threshold, &n.left,
                        &n.right, &n.value) != 5)
            throw ModelError("tree deserialize: bad node line '" + lines[pos] + "'");
    }
    return t;
}

Tree Tree::from_nodes(std::vector<TreeNode> nodes) {
    Tree t;
    t.nodes_ = std::move(nodes);
    return t;
}

} // namespace daybt
