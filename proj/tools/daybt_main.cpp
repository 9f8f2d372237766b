#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daybt/cli/commands.hpp"
#include "daybt/errors.hpp"
#include "daybt/version.hpp"

namespace {

// exit codes: 1 config, 2 data, 3 model
int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const daybt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const daybt::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const daybt::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"daytime open-to-close walk-forward backtester"};
    app.set_version_flag("--version", std::string(daybt::kToolVersion));
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute one experiment from a config file");
    std::string run_config;
    std::string run_out;
    std::int64_t run_seed = -1;
    double run_cost = -1.0;
    bool seed_set = false, cost_set = false;
    run->add_option("--config", run_config, "experiment config file")->required();
    run->add_option("--out", run_out, "output directory (overrides config)");
    run->add_option("--seed", run_seed, "master seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--cost", run_cost, "per-side fractional cost (overrides config)")
        ->each([&](const std::string&) { cost_set = true; });

    // compare
    auto* compare = app.add_subcommand("compare", "consolidate completed runs side by side");
    std::vector<std::string> compare_dirs;
    std::string compare_out = "compare";
    compare->add_option("dirs", compare_dirs, "run directories")->required()->expected(-2);
    compare->add_option("--out", compare_out, "output directory");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "recompute monthly metrics from return CSVs");
    std::string m_monthly, m_rates, m_bench;
    std::string m_out = "metrics";
    metrics->add_option("--monthly", m_monthly, "model monthly returns CSV")->required();
    metrics->add_option("--rates", m_rates, "risk-free rates CSV")->required();
    metrics->add_option("--benchmark", m_bench, "benchmark monthly returns CSV")->required();
    metrics->add_option("--out", m_out, "output directory");

    // validate-data
    auto* validate = app.add_subcommand("validate-data", "parse and align the configured inputs");
    std::string v_config;
    validate->add_option("--config", v_config, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        daybt::ConfigOverrides ov;
        if (seed_set) ov.master_seed = static_cast<std::uint64_t>(run_seed);
        if (cost_set) ov.cost_per_side = run_cost;
        if (!run_out.empty()) ov.out_dir = run_out;
        return run_guarded([&] { daybt::cmd_run(run_config, ov); });
    }
    if (compare->parsed())
        return run_guarded([&] { daybt::cmd_compare(compare_dirs, compare_out); });
    if (metrics->parsed())
        return run_guarded([&] { daybt::cmd_metrics(m_monthly, m_rates, m_bench, m_out); });
    if (validate->parsed())
        return run_guarded([&] { daybt::cmd_validate_data(v_config); });
    return 1;
}
