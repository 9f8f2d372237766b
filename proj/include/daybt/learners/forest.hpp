#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daybt/learners/tree.hpp"

namespace daybt {

struct ForestConfig {
    int n_trees = 25; // >= 1
    bool bootstrap = true;
    TreeConfig tree;
};

struct ForestVote {
    int direction = -1;    // majority vote; exact tie -> -1
    double vote_fraction = 0.0; // mean of per-tree {0,1} predictions
};

// Bagged CART ensemble. Tree i trains on a bootstrap resample drawn with a
// seed derived from (cfg.tree.rng_seed, i) before any parallel dispatch, so
// parallel and sequential fits are bit-identical.
class Forest {
public:
    static Forest fit(const Matrix& X, const std::vector<int>& y, const ForestConfig& cfg);

    ForestVote predict(const double* x) const;
    ForestVote predict(const std::vector<double>& x) const { return predict(x.data()); }

    std::size_t size() const { return trees_.size(); }
    const std::vector<Tree>& trees() const { return trees_; }

    std::string serialize() const;
    static Forest deserialize(const std::string& text);

private:
    std::vector<Tree> trees_;
};

} // namespace daybt
