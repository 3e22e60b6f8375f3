#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscint/phase.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

// One line of the report CSV. Unset optionals print as empty fields.
struct CsvRow {
  std::string suite;
  std::string case_name;
  std::optional<double> lambda, eps, c, value_re, value_im, magnitude, err_est, bound, delta_hat;
  std::string verdict;  // pass | fail | info
};

inline constexpr const char* kCsvHeader =
    "suite,case,lambda,eps,c,value_re,value_im,magnitude,err_est,bound,delta_hat,verdict";

struct Verdict {
  std::string name;
  int criterion = 0;  // acceptance criterion this verdict feeds, 0 for none
  bool pass = false;
  std::string detail;
  nlohmann::json witness;  // inputs reproducing a failure
};

struct SuiteReport {
  std::string suite;
  std::vector<CsvRow> rows;
  std::vector<CsvRow> plot_rows;
  std::vector<Verdict> verdicts;
  std::uint64_t seed = 0;
  std::string version;

  bool passed() const;
};

struct ExperimentConfig {
  std::string suite;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string csv_path;
  std::string json_path;
  std::string plot_path;
  QuadConfig quad;
  nlohmann::json doc;  // merged document, includes resolved
  std::string origin;  // file the config came from
  std::string text;    // raw text of that file, for line references
};

std::vector<std::string> suite_ids();
std::string version_string();
// OSCINT_CONFIG_DIR if set, else the configs/ directory of the source tree.
std::string default_config_dir();

// Parses a config file; `default` resolves to <default_config_dir>/<suite>.json.
// Errors are Error(ErrorCode::Config) naming the file and line.
ExperimentConfig load_config(const std::string& path, const std::string& suite);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

SuiteReport run_suite(const ExperimentConfig& cfg);

std::string format_csv(const std::vector<CsvRow>& rows);
std::string format_report_json(const SuiteReport& report);
// Writes the CSV, JSON report and plot CSV named in the config (empty paths are skipped).
void write_outputs(const SuiteReport& report, const ExperimentConfig& cfg);

// Phase specs shared by the CLI and the suites.
PhaseFunction phase_from_json(const nlohmann::json& spec);
Phase2D phase2d_from_json(const nlohmann::json& spec);

}  // namespace oscint
