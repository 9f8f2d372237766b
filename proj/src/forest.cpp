#include "daybt/learners/forest.hpp"

#include <sstream>

#include "daybt/errors.hpp"
#include "daybt/parallel.hpp"
#include "daybt/rng.hpp"

namespace daybt {

Forest Forest::fit(const Matrix& X, const std::vector<int>& y, const ForestConfig& cfg) {
    if (cfg.n_trees < 1) throw ModelError("forest fit: n_trees must be >= 1");
    if (X.rows() == 0) throw ModelError("forest fit: empty input");
    const std::size_t n = X.rows();

    Forest f;
    f.trees_.resize(static_cast<std::size_t>(cfg.n_trees));
    par::parallel_for(f.trees_.size(), [&](std::size_t i) {
        TreeConfig tc = cfg.tree;
        tc.rng_seed = derive_seed(cfg.tree.rng_seed, i);
        if (cfg.bootstrap) {
            Rng rng(tc.rng_seed);
            Matrix Xb(n, X.cols());
            std::vector<int> yb(n);
            for (std::size_t r = 0; r < n; ++r) {
                const auto src = static_cast<std::size_t>(rng.next_below(n));
                for (std::size_t c = 0; c < X.cols(); ++c) Xb(r, c) = X(src, c);
                yb[r] = y[src];
            }
            // advance the tree's own stream past the resampling draws
            tc.rng_seed = rng.next_u64();
            f.trees_[i] = Tree::fit_classifier(Xb, yb, {}, tc);
        } else {
            f.trees_[i] = Tree::fit_classifier(X, y, {}, tc);
        }
    });
    return f;
}

ForestVote Forest::predict(const double* x) const {
    std::size_t positive = 0;
    for (const Tree& t : trees_)
        if (Tree::direction(t.predict(x)) > 0) ++positive;
    ForestVote v;
    v.vote_fraction = static_cast<double>(positive) / static_cast<double>(trees_.size());
    v.direction = 2 * positive > trees_.size() ? +1 : -1;
    return v;
}

std::string Forest::serialize() const {
    std::string out = "forest v1 " + std::to_string(trees_.size()) + "\n";
    for (const Tree& t : trees_) out += t.serialize();
    return out;
}

Forest Forest::deserialize(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    std::size_t count = 0;
    if (lines.empty() || std::sscanf(lines[0].c_str(), "forest v1 %zu", &count) != 1)
        throw ModelError("forest deserialize: bad header");
    Forest f;
    std::size_t pos = 1;
    for (std::size_t i = 0; i < count; ++i) f.trees_.push_back(Tree::deserialize_lines(lines, pos));
    return f;
}

} // namespace daybt
