#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "daybt/learners/matrix.hpp"

namespace daybt {

struct TreeConfig {
    int max_depth = 8;          // >= 1
    int min_samples_split = 2;  // >= 2
    int features_per_split = 0; // 0 = all features, else 1..D sampled per node
    std::uint64_t rng_seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf payload: class +1 fraction or regression value
};

// CART with midpoint thresholds between consecutive distinct sorted values.
// Ties between equal-cost splits resolve to the lowest feature index, then
// the lowest threshold. Deterministic for a given (data, config, seed).
class Tree {
public:
    // Classification: labels in {+1,-1} with nonnegative sample weights;
    // splits minimize weighted Gini impurity; leaves store the weighted +1
    // class fraction.
    static Tree fit_classifier(const Matrix& X, const std::vector<int>& y,
                               const std::vector<double>& weights, const TreeConfig& cfg);

    // Regression: real targets, variance-reduction splits. leaf_value maps
    // the member sample indices to the leaf output (defaults to the mean
    // when empty).
    using LeafValueFn = std::function<double(const std::vector<int>&)>;
    static Tree fit_regression(const Matrix& X, const std::vector<double>& targets,
                               const TreeConfig& cfg, const LeafValueFn& leaf_value = {});

    double predict(const double* x) const;
    double predict(const std::vector<double>& x) const { return predict(x.data()); }

    // +1 class fraction interpreted as a direction; exactly 0.5 maps to -1.
    static int direction(double positive_fraction) { return positive_fraction > 0.5 ? +1 : -1; }

    int depth() const;
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    std::string serialize() const;
    static Tree deserialize_lines(const std::vector<std::string>& lines, std::size_t& pos);

    static Tree from_nodes(std::vector<TreeNode> nodes);

    bool empty() const { return nodes_.empty(); }

private:
    std::vector<TreeNode> nodes_; // preorder; root at 0
};

} // namespace daybt
