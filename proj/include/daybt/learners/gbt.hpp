#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daybt/learners/tree.hpp"

namespace daybt {

struct BoostConfig {
    int n_rounds = 50;         // >= 0
    double learning_rate = 0.1; // (0, 1]
    TreeConfig tree{3, 2, 0, 0}; // shallow regression trees
};

struct GbtPrediction {
    int direction = -1;       // probability > 0.5 -> +1, else -1
    double probability = 0.5; // sigma(F(x))
};

// Gradient boosting with logistic loss. F0 is the prior log-odds; each round
// fits a variance-split regression tree to the residuals y01 - sigma(F) and
// applies one Newton step per leaf (sum r / sum sigma(1-sigma)). A halving
// safeguard rescales any round that would raise the training loss, which
// keeps the per-round loss trace nonincreasing (the loss is convex in the
// applied scale with nonpositive derivative at zero, so a small enough
// scale never hurts).
class BoostedModel {
public:
    static BoostedModel fit(const Matrix& X, const std::vector<int>& y, const BoostConfig& cfg);

    GbtPrediction predict(const double* x) const;
    GbtPrediction predict(const std::vector<double>& x) const { return predict(x.data()); }

    // mean logistic loss on the training data after each round; entry 0 is
    // the prior-only loss
    const std::vector<double>& loss_trace() const { return loss_trace_; }

    std::string serialize() const;
    static BoostedModel deserialize(const std::string& text);

private:
    double base_score_ = 0.0; // prior log-odds
    std::vector<Tree> trees_;
    std::vector<double> scales_; // learning_rate, possibly halved by the safeguard
    std::vector<double> loss_trace_;
};

double sigmoid(double z);

} // namespace daybt
