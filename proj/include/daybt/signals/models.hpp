#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "daybt/data.hpp"
#include "daybt/decision.hpp"
#include "daybt/learners/forest.hpp"
#include "daybt/learners/gbt.hpp"
#include "daybt/learners/lstm.hpp"
#include "daybt/signals/features.hpp"

namespace daybt {

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0; // half-open

    std::size_t size() const { return end - begin; }
};

// Behavioral contract shared by all strategies. decide(t) may read, for day
// t, only fields of days < t plus day-t ES and VIX opens (the information
// boundary); this is enforced by fuzz tests, not by types.
class SignalModel {
public:
    virtual ~SignalModel() = default;

    virtual std::string name() const = 0;

    // Sequential models chain state between walk-forward windows and must
    // be fitted in window order; others may be fitted concurrently.
    virtual bool sequential() const { return false; }

    virtual void fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
                     const SignalModel* prev) = 0;

    virtual Decision decide(const Dataset& ds, std::size_t t) const = 0;
};

class PassiveModel final : public SignalModel {
public:
    std::string name() const override { return "passive"; }
    void fit(const Dataset&, IndexRange, std::uint64_t, const SignalModel*) override {}
    Decision decide(const Dataset&, std::size_t) const override { return {+1, 1.0}; }
};

struct LstmModelConfig {
    LstmConfig net; // sequence_length 20, hidden_dim 16 by default
};

class LstmModel final : public SignalModel {
public:
    explicit LstmModel(LstmModelConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "lstm"; }
    void fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
             const SignalModel* prev) override;
    Decision decide(const Dataset& ds, std::size_t t) const override;

    const LstmParams& params() const { return params_; }

private:
    LstmModelConfig cfg_;
    LstmParams params_;
    ZScoreParams stats_;
    bool fitted_ = false;
};

struct TreeFeatureConfig {
    int lookback = 5;
    bool raw_prices = false;
};

struct GbtModelConfig {
    TreeFeatureConfig features;
    BoostConfig boost;
};

class GbtModel final : public SignalModel {
public:
    explicit GbtModel(GbtModelConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "gbt"; }
    void fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
             const SignalModel* prev) override;
    Decision decide(const Dataset& ds, std::size_t t) const override;

private:
    GbtModelConfig cfg_;
    BoostedModel model_;
    bool fitted_ = false;
};

struct RfModelConfig {
    TreeFeatureConfig features;
    int n_trees = 25;
    int max_depth = 8;
    int min_samples_split = 2;
    int features_per_split = -1; // -1 = floor(sqrt(D)), 0 = all
    bool bootstrap = true;
};

class RfModel final : public SignalModel {
public:
    explicit RfModel(RfModelConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "rf"; }
    void fit(const Dataset& ds, IndexRange train, std::uint64_t seed,
             const SignalModel* prev) override;
    Decision decide(const Dataset& ds, std::size_t t) const override;

private:
    RfModelConfig cfg_;
    Forest forest_;
    bool fitted_ = false;
};

// Collects the train-slice samples that have enough feature history.
// first_usable is the smallest dataset index with full history.
std::vector<std::size_t> usable_train_indices(IndexRange train, std::size_t first_usable);

} // namespace daybt
