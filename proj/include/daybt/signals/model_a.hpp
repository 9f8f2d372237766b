#pragma once

#include <cstdint>
#include <vector>

#include "daybt/learners/mlp.hpp"
#include "daybt/learners/tree.hpp"
#include "daybt/signals/models.hpp"

namespace daybt {

// Dual-agent long/short/closed strategy. Agent 1 is a small feedforward net
// over the flattened lookback block; agent 2 is a CART tree over a 20-day
// close-sequence block. A position is opened only when the agents agree on
// direction and their combined confidence clears a threshold theta; theta is
// re-selected at every fit from a fixed grid by replaying the gated policy
// on the training slice and scoring the trailing window's realized rewards
// by mean/std. Refits chain warm-started net weights from the previous day.
struct ModelAConfig {
    int net_hidden1 = 16;
    int net_hidden2 = 8;
    int net_epochs = 150;       // first fit
    int net_refit_epochs = 30;  // warm-started daily refits
    double net_learning_rate = 0.05;
    int net_lookback = 5; // tree-feature block for agent 1

    int tree_lookback = 20; // close-sequence length for agent 2
    int tree_max_depth = 4;
    int tree_min_samples_split = 10;

    std::vector<double> theta_grid = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90};
    int reward_window = 50; // trailing days scored during theta selection
};

struct ModelAState {
    MlpParams net;
    ZScoreParams net_stats; // per-column normalization of agent-1 features
    Tree tree;
    double theta = 0.5;
    bool fitted = false;
};

struct AgentOpinions {
    double p_net = 0.5;
    double p_tree = 0.5;
};

// Gate shared by fitting (replay) and deciding.
Decision gate_decision(double p_net, double p_tree, double theta);

class ModelA final : public SignalModel {
public:
    explicit ModelA(ModelAConfig cfg = {}) : cfg_(cfg) {}

    std::string name() const override { return "model_a"; }
    bool sequential() const override { return true; }

    void fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
             const SignalModel* prev) override;
    Decision decide(const Dataset& ds, std::size_t t) const override;

    const ModelAState& state() const { return state_; }
    AgentOpinions opinions(const Dataset& ds, std::size_t t) const;

private:
    ModelAConfig cfg_;
    ModelAState state_;
};

} // namespace daybt
