#include "daybt/cli/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "daybt/errors.hpp"

namespace daybt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[32]; // shortest representation that parses back exactly
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
}

KeyValues KeyValues::parse(std::istream& in, const std::string& origin) {
    KeyValues kv;
    kv.origin_ = origin;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (kv.values_.count(key))
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
        kv.values_[key] = value;
        kv.consumed_[key] = false;
    }
    return kv;
}

std::optional<std::string> KeyValues::maybe_string(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    consumed_[key] = true;
    return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) {
    return maybe_string(key).value_or(fallback);
}

std::string KeyValues::require_string(const std::string& key) {
    auto v = maybe_string(key);
    if (!v) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return *v;
}

std::int64_t KeyValues::get_int(const std::string& key, std::int64_t fallback) {
    auto v = maybe_string(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t n = std::stoll(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: '" + *v + "'");
    }
}

double KeyValues::get_double(const std::string& key, double fallback) {
    auto v = maybe_string(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument(*v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" + *v + "'");
    }
}

bool KeyValues::get_bool(const std::string& key, bool fallback) {
    auto v = maybe_string(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: '" + *v + "'");
}

std::vector<double> KeyValues::get_double_list(const std::string& key,
                                               const std::vector<double>& fallback) {
    auto v = maybe_string(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "' has a bad list element: '" + item +
                              "'");
        }
    }
    if (out.empty()) throw ConfigError(origin_ + ": key '" + key + "' is an empty list");
    return out;
}

std::vector<std::string> KeyValues::unconsumed() const {
    std::vector<std::string> keys;
    for (const auto& [key, used] : consumed_)
        if (!used) keys.push_back(key);
    return keys;
}

bool known_model_id(const std::string& id) {
    return id == "passive" || id == "lstm" || id == "gbt" || id == "rf" || id == "model_a";
}

ExperimentConfig load_experiment_config(const std::string& path, const ConfigOverrides& ov) {
    KeyValues kv = KeyValues::parse_file(path);
    ExperimentConfig cfg;
    cfg.name = kv.get_string("name", cfg.name);
    cfg.es_csv = kv.require_string("es_csv");
    cfg.vix_csv = kv.require_string("vix_csv");
    cfg.rates_csv = kv.require_string("rates_csv");
    if (auto v = kv.maybe_string("date_start")) cfg.date_start = parse_date(*v);
    if (auto v = kv.maybe_string("date_end")) cfg.date_end = parse_date(*v);
    cfg.model_id = kv.get_string("model", cfg.model_id);
    cfg.benchmark_id = kv.get_string("benchmark", cfg.benchmark_id);
    cfg.train_window = static_cast<std::size_t>(kv.get_int("train_window", 250));
    cfg.test_window = static_cast<std::size_t>(kv.get_int("test_window", 50));
    cfg.master_seed = static_cast<std::uint64_t>(kv.get_int("master_seed", 0));
    cfg.cost_per_side = kv.get_double("cost_per_side", 0.0);
    cfg.out_dir = kv.get_string("out_dir", cfg.out_dir);

    if (!known_model_id(cfg.model_id))
        throw ConfigError("unrecognized model id '" + cfg.model_id + "'");
    if (!known_model_id(cfg.benchmark_id))
        throw ConfigError("unrecognized benchmark id '" + cfg.benchmark_id + "'");
    if (cfg.model_id == "model_a") cfg.test_window = 1; // daily reassessment regime

    // ---- model hyperparameters (dotted keys) ----
    cfg.lstm.net.hidden_dim = static_cast<int>(kv.get_int("lstm.hidden_dim", 16));
    cfg.lstm.net.sequence_length = static_cast<int>(kv.get_int("lstm.sequence_length", 20));
    cfg.lstm.net.epochs = static_cast<int>(kv.get_int("lstm.epochs", 80));
    cfg.lstm.net.learning_rate = kv.get_double("lstm.learning_rate", 0.05);

    cfg.gbt.features.lookback = static_cast<int>(kv.get_int("gbt.lookback", 5));
    cfg.gbt.features.raw_prices = kv.get_bool("gbt.raw_prices", false);
    cfg.gbt.boost.n_rounds = static_cast<int>(kv.get_int("gbt.n_rounds", 50));
    cfg.gbt.boost.learning_rate = kv.get_double("gbt.learning_rate", 0.1);
    cfg.gbt.boost.tree.max_depth = static_cast<int>(kv.get_int("gbt.max_depth", 3));
    cfg.gbt.boost.tree.min_samples_split =
        static_cast<int>(kv.get_int("gbt.min_samples_split", 2));

    cfg.rf.features.lookback = static_cast<int>(kv.get_int("rf.lookback", 5));
    cfg.rf.features.raw_prices = kv.get_bool("rf.raw_prices", false);
    cfg.rf.n_trees = static_cast<int>(kv.get_int("rf.n_trees", 25));
    cfg.rf.max_depth = static_cast<int>(kv.get_int("rf.max_depth", 8));
    cfg.rf.min_samples_split = static_cast<int>(kv.get_int("rf.min_samples_split", 2));
    cfg.rf.features_per_split = static_cast<int>(kv.get_int("rf.features_per_split", -1));
    cfg.rf.bootstrap = kv.get_bool("rf.bootstrap", true);

    cfg.model_a.net_hidden1 = static_cast<int>(kv.get_int("model_a.net_hidden1", 16));
    cfg.model_a.net_hidden2 = static_cast<int>(kv.get_int("model_a.net_hidden2", 8));
    cfg.model_a.net_epochs = static_cast<int>(kv.get_int("model_a.net_epochs", 150));
    cfg.model_a.net_refit_epochs = static_cast<int>(kv.get_int("model_a.net_refit_epochs", 30));
    cfg.model_a.net_learning_rate = kv.get_double("model_a.net_learning_rate", 0.05);
    cfg.model_a.net_lookback = static_cast<int>(kv.get_int("model_a.net_lookback", 5));
    cfg.model_a.tree_lookback = static_cast<int>(kv.get_int("model_a.tree_lookback", 20));
    cfg.model_a.tree_max_depth = static_cast<int>(kv.get_int("model_a.tree_max_depth", 4));
    cfg.model_a.tree_min_samples_split =
        static_cast<int>(kv.get_int("model_a.tree_min_samples_split", 10));
    cfg.model_a.theta_grid = kv.get_double_list("model_a.theta_grid", cfg.model_a.theta_grid);
    cfg.model_a.reward_window = static_cast<int>(kv.get_int("model_a.reward_window", 50));

    const auto stray = kv.unconsumed();
    if (!stray.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : stray) msg += " '" + k + "'";
        throw ConfigError(msg);
    }

    if (ov.master_seed) cfg.master_seed = *ov.master_seed;
    if (ov.cost_per_side) cfg.cost_per_side = *ov.cost_per_side;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;

    for (const char* p : {"es_csv", "vix_csv", "rates_csv"}) {
        const std::string& file = p == std::string("es_csv")   ? cfg.es_csv
                                  : p == std::string("vix_csv") ? cfg.vix_csv
                                                                : cfg.rates_csv;
        if (!std::filesystem::exists(file))
            throw DataError(std::string("input file does not exist: ") + file + " (" + p + ")");
    }
    if (cfg.train_window == 0 || cfg.test_window == 0)
        throw ConfigError("train_window and test_window must be positive");
    if (cfg.cost_per_side < 0.0) throw ConfigError("cost_per_side must be nonnegative");

    // resolved settings, defaults expanded, stable order for the manifest
    auto& r = cfg.resolved;
    r.emplace_back("name", cfg.name);
    r.emplace_back("es_csv", cfg.es_csv);
    r.emplace_back("vix_csv", cfg.vix_csv);
    r.emplace_back("rates_csv", cfg.rates_csv);
    r.emplace_back("date_start", cfg.date_start ? cfg.date_start->iso() : "");
    r.emplace_back("date_end", cfg.date_end ? cfg.date_end->iso() : "");
    r.emplace_back("model", cfg.model_id);
    r.emplace_back("benchmark", cfg.benchmark_id);
    r.emplace_back("train_window", std::to_string(cfg.train_window));
    r.emplace_back("test_window", std::to_string(cfg.test_window));
    r.emplace_back("master_seed", std::to_string(cfg.master_seed));
    r.emplace_back("cost_per_side", fmt_double(cfg.cost_per_side));
    r.emplace_back("lstm.hidden_dim", std::to_string(cfg.lstm.net.hidden_dim));
    r.emplace_back("lstm.sequence_length", std::to_string(cfg.lstm.net.sequence_length));
    r.emplace_back("lstm.epochs", std::to_string(cfg.lstm.net.epochs));
    r.emplace_back("lstm.learning_rate", fmt_double(cfg.lstm.net.learning_rate));
    r.emplace_back("gbt.lookback", std::to_string(cfg.gbt.features.lookback));
    r.emplace_back("gbt.raw_prices", cfg.gbt.features.raw_prices ? "true" : "false");
    r.emplace_back("gbt.n_rounds", std::to_string(cfg.gbt.boost.n_rounds));
    r.emplace_back("gbt.learning_rate", fmt_double(cfg.gbt.boost.learning_rate));
    r.emplace_back("gbt.max_depth", std::to_string(cfg.gbt.boost.tree.max_depth));
    r.emplace_back("gbt.min_samples_split", std::to_string(cfg.gbt.boost.tree.min_samples_split));
    r.emplace_back("rf.lookback", std::to_string(cfg.rf.features.lookback));
    r.emplace_back("rf.raw_prices", cfg.rf.features.raw_prices ? "true" : "false");
    r.emplace_back("rf.n_trees", std::to_string(cfg.rf.n_trees));
    r.emplace_back("rf.max_depth", std::to_string(cfg.rf.max_depth));
    r.emplace_back("rf.min_samples_split", std::to_string(cfg.rf.min_samples_split));
    r.emplace_back("rf.features_per_split", std::to_string(cfg.rf.features_per_split));
    r.emplace_back("rf.bootstrap", cfg.rf.bootstrap ? "true" : "false");
    r.emplace_back("model_a.net_hidden1", std::to_string(cfg.model_a.net_hidden1));
    r.emplace_back("model_a.net_hidden2", std::to_string(cfg.model_a.net_hidden2));
    r.emplace_back("model_a.net_epochs", std::to_string(cfg.model_a.net_epochs));
    r.emplace_back("model_a.net_refit_epochs", std::to_string(cfg.model_a.net_refit_epochs));
    r.emplace_back("model_a.net_learning_rate", fmt_double(cfg.model_a.net_learning_rate));
    r.emplace_back("model_a.net_lookback", std::to_string(cfg.model_a.net_lookback));
    r.emplace_back("model_a.tree_lookback", std::to_string(cfg.model_a.tree_lookback));
    r.emplace_back("model_a.tree_max_depth", std::to_string(cfg.model_a.tree_max_depth));
    r.emplace_back("model_a.tree_min_samples_split",
                   std::to_string(cfg.model_a.tree_min_samples_split));
    {
        std::string grid;
        for (double t : cfg.model_a.theta_grid) {
            if (!grid.empty()) grid += ',';
            grid += fmt_double(t);
        }
        r.emplace_back("model_a.theta_grid", grid);
    }
    r.emplace_back("model_a.reward_window", std::to_string(cfg.model_a.reward_window));
    return cfg;
}

ModelFactory make_model_factory(const ExperimentConfig& cfg, const std::string& model_id) {
    if (model_id == "passive") return [] { return std::make_unique<PassiveModel>(); };
    if (model_id == "lstm")
        return [c = cfg.lstm] { return std::make_unique<LstmModel>(c); };
    if (model_id == "gbt") return [c = cfg.gbt] { return std::make_unique<GbtModel>(c); };
    if (model_id == "rf") return [c = cfg.rf] { return std::make_unique<RfModel>(c); };
    if (model_id == "model_a")
        return [c = cfg.model_a] { return std::make_unique<ModelA>(c); };
    throw ConfigError("unrecognized model id '" + model_id + "'");
}

} // namespace daybt
