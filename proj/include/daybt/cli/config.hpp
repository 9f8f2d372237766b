#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daybt/backtest.hpp"
#include "daybt/signals/model_a.hpp"
#include "daybt/signals/models.hpp"

namespace daybt {

// Flat `key = value` file with '#' comments and dotted keys for model
// hyperparameters (format id "kv1", recorded in the manifest).
class KeyValues {
public:
    static KeyValues parse_file(const std::string& path);
    static KeyValues parse(std::istream& in, const std::string& origin);

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    std::int64_t get_int(const std::string& key, std::int64_t fallback);
    double get_double(const std::string& key, double fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback);
    std::optional<std::string> maybe_string(const std::string& key);

    // Keys present in the file but never consumed => typo protection.
    std::vector<std::string> unconsumed() const;

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> consumed_;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::string es_csv;
    std::string vix_csv;
    std::string rates_csv;
    std::optional<Date> date_start;
    std::optional<Date> date_end;
    std::string model_id = "passive";
    std::string benchmark_id = "passive";
    std::size_t train_window = 250;
    std::size_t test_window = 50;
    std::uint64_t master_seed = 0;
    double cost_per_side = 0.0;
    std::string out_dir = "out";

    LstmModelConfig lstm;
    GbtModelConfig gbt;
    RfModelConfig rf;
    ModelAConfig model_a;

    // every effective setting, defaults expanded, in stable order
    std::vector<std::pair<std::string, std::string>> resolved;
};

// Parses and validates a config file; applies optional command-line
// overrides for seed/cost/output directory. Throws ConfigError.
struct ConfigOverrides {
    std::optional<std::uint64_t> master_seed;
    std::optional<double> cost_per_side;
    std::optional<std::string> out_dir;
};

ExperimentConfig load_experiment_config(const std::string& path, const ConfigOverrides& ov);

bool known_model_id(const std::string& id);

ModelFactory make_model_factory(const ExperimentConfig& cfg, const std::string& model_id);

} // namespace daybt
