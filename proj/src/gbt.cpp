#include "daybt/learners/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "daybt/errors.hpp"
#include "daybt/rng.hpp"

namespace daybt {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace {

// mean binary cross-entropy of logits F against y01, in a softplus form
// that stays finite for large |F|
double mean_logistic_loss(const std::vector<double>& F, const std::vector<double>& y01) {
    double loss = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double z = F[i];
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += softplus - y01[i] * z;
    }
    return loss / static_cast<double>(F.size());
}

} // namespace

BoostedModel BoostedModel::fit(const Matrix& X, const std::vector<int>& y,
                               const BoostConfig& cfg) {
    if (X.rows() == 0) throw ModelError("gbt fit: empty input");
    if (y.size() != X.rows()) throw ModelError("gbt fit: label count != row count");
    if (cfg.n_rounds < 0) throw ModelError("gbt fit: n_rounds must be >= 0");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
        throw ModelError("gbt fit: learning_rate must be in (0, 1]");

    const std::size_t n = X.rows();
    std::vector<double> y01(n);
    double positives = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y01[i] = y[i] > 0 ? 1.0 : 0.0;
        positives += y01[i];
    }
    double p = positives / static_cast<double>(n);
    p = std::clamp(p, 1e-12, 1.0 - 1e-12); // constant-label data stays finite

    BoostedModel model;
    model.base_score_ = std::log(p / (1.0 - p));

    std::vector<double> F(n, model.base_score_);
    model.loss_trace_.push_back(mean_logistic_loss(F, y01));

    std::vector<double> residual(n), tree_out(n);
    for (int round = 0; round < cfg.n_rounds; ++round) {
        std::vector<double> prob(n);
        for (std::size_t i = 0; i < n; ++i) {
            prob[i] = sigmoid(F[i]);
            residual[i] = y01[i] - prob[i];
        }
        TreeConfig tc = cfg.tree;
        tc.rng_seed = derive_seed(cfg.tree.rng_seed, static_cast<std::uint64_t>(round));
        const auto newton_leaf = [&](const std::vector<int>& idx) {
            double num = 0.0, den = 0.0;
            for (int i : idx) {
                num += residual[static_cast<std::size_t>(i)];
                den += prob[static_cast<std::size_t>(i)] * (1.0 - prob[static_cast<std::size_t>(i)]);
            }
            return den > 0.0 ? num / den : 0.0;
        };
        Tree tree = Tree::fit_regression(X, residual, tc, newton_leaf);

        for (std::size_t i = 0; i < n; ++i) tree_out[i] = tree.predict(X.row(i));

        double scale = cfg.learning_rate;
        const double prev_loss = model.loss_trace_.back();
        std::vector<double> Fnew(n);
        double loss = 0.0;
        for (int halving = 0; halving <= 40; ++halving) {
            for (std::size_t i = 0; i < n; ++i) Fnew[i] = F[i] + scale * tree_out[i];
            loss = mean_logistic_loss(Fnew, y01);
            if (loss <= prev_loss) break;
            scale *= 0.5;
            if (halving == 40) { // degenerate round contributes nothing
                scale = 0.0;
                Fnew = F;
                loss = prev_loss;
            }
        }
        F = Fnew;
        model.trees_.push_back(std::move(tree));
        model.scales_.push_back(scale);
        model.loss_trace_.push_back(loss);
    }
    return model;
}

GbtPrediction BoostedModel::predict(const double* x) const {
    double f = base_score_;
    for (std::size_t i = 0; i < trees_.size(); ++i) f += scales_[i] * trees_[i].predict(x);
    GbtPrediction p;
    p.probability = sigmoid(f);
    p.direction = p.probability > 0.5 ? +1 : -1;
    return p;
}

std::string BoostedModel::serialize() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", base_score_);
    std::string out = "gbt v1 " + std::to_string(trees_.size()) + " " + buf + "\n";
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "scale %.17g\n", scales_[i]);
        out += buf;
        out += trees_[i].serialize();
    }
    return out;
}

BoostedModel BoostedModel::deserialize(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    BoostedModel m;
    std::size_t count = 0;
    if (lines.empty() ||
        std::sscanf(lines[0].c_str(), "gbt v1 %zu %lg", &count, &m.base_score_) != 2)
        throw ModelError("gbt deserialize: bad header");
    std::size_t pos = 1;
    for (std::size_t i = 0; i < count; ++i) {
        double scale = 0.0;
        if (pos >= lines.size() || std::sscanf(lines[pos].c_str(), "scale %lg", &scale) != 1)
            throw ModelError("gbt deserialize: bad scale line");
        ++pos;
        m.scales_.push_back(scale);
        m.trees_.push_back(Tree::deserialize_lines(lines, pos));
    }
    return m;
}

} // namespace daybt
