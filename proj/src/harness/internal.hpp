#pragma once

#include <string>
#include <vector>

#include "oscint/harness.hpp"

namespace oscint::harness_detail {

using nlohmann::json;

// 1-based line of the first occurrence of `needle` in text, 0 if absent.
int line_of(const std::string& text, const std::string& needle);
[[noreturn]] void config_fail(const ExperimentConfig& cfg, const std::string& key, const std::string& msg);

struct GridSpec {
  double lo = 1e2;
  double hi = 1e6;
  int per_decade = 25;
};

GridSpec grid_spec(const ExperimentConfig& cfg, const json& parent, const std::string& key, GridSpec fallback);
std::vector<double> make_grid(const GridSpec& g);

double number_or(const json& j, const std::string& key, double fallback);
std::string case_name(const json& c);

// Suite entry points; each fills rows and verdicts of `out`.
void run_t1(const ExperimentConfig& cfg, SuiteReport& out);
void run_t2(const ExperimentConfig& cfg, SuiteReport& out);
void run_t3(const ExperimentConfig& cfg, SuiteReport& out);
void run_t4(const ExperimentConfig& cfg, SuiteReport& out);
void run_t5(const ExperimentConfig& cfg, SuiteReport& out);
void run_t6(const ExperimentConfig& cfg, SuiteReport& out);
void run_t7(const ExperimentConfig& cfg, SuiteReport& out);
void run_hlog(const ExperimentConfig& cfg, SuiteReport& out);

}  // namespace oscint::harness_detail
