#pragma once

#include <string>
#include <vector>

#include "daybt/cli/config.hpp"

namespace daybt {

// run: ingest -> walk-forward -> metrics -> report bundle in the out dir.
void cmd_run(const std::string& config_path, const ConfigOverrides& overrides);

// compare: consolidated table + equity overlay across completed run dirs
// sharing one dataset fingerprint.
void cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_dir);

// metrics: monthly-returns oracle path; no raw market data required.
void cmd_metrics(const std::string& monthly_csv, const std::string& rates_csv,
                 const std::string& benchmark_csv, const std::string& out_dir);

// validate-data: parse + align the configured inputs, print a summary.
void cmd_validate_data(const std::string& config_path);

} // namespace daybt
