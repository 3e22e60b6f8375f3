#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "internal.hpp"
#include "oscint/error.hpp"
#include "oscint/parallel.hpp"

namespace oscint {

namespace fs = std::filesystem;
using nlohmann::json;

bool SuiteReport::passed() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

SuiteReport run_suite(const ExperimentConfig& cfg) {
  using namespace harness_detail;
  SuiteReport r;
  r.suite = cfg.suite;
  r.seed = cfg.seed;
  r.version = version_string();
  if (cfg.suite == "T1") run_t1(cfg, r);
  else if (cfg.suite == "T2") run_t2(cfg, r);
  else if (cfg.suite == "T3") run_t3(cfg, r);
  else if (cfg.suite == "T4") run_t4(cfg, r);
  else if (cfg.suite == "T5") run_t5(cfg, r);
  else if (cfg.suite == "T6") run_t6(cfg, r);
  else if (cfg.suite == "T7") run_t7(cfg, r);
  else if (cfg.suite == "H-LOG") run_hlog(cfg, r);
  else fail(ErrorCode::Config, "unknown suite '" + cfg.suite + "'");
  return r;
}

namespace {

void put_num(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  out += buf;
}

void put_str(std::string& out, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out += s;
    return;
  }
  out += '"';
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

void write_file(const std::string& path, const std::string& body) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorCode::Config, path + ": cannot open for writing");
  out << body;
}

}  // namespace

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    put_str(out, r.suite);
    out += ',';
    put_str(out, r.case_name);
    for (const auto* v : {&r.lambda, &r.eps, &r.c, &r.value_re, &r.value_im, &r.magnitude, &r.err_est, &r.bound,
                          &r.delta_hat}) {
      put_num(out, *v);
    }
    out += ',';
    out += r.verdict;
    out += '\n';
  }
  return out;
}

std::string format_report_json(const SuiteReport& report) {
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    json j = {{"name", v.name}, {"criterion", v.criterion}, {"pass", v.pass}, {"detail", v.detail}};
    if (!v.witness.is_null()) j["witness"] = v.witness;
    verdicts.push_back(std::move(j));
  }
  json doc = {{"suite", report.suite},
              {"version", report.version},
              {"seed", report.seed},
              {"hardware_threads", std::thread::hardware_concurrency()},
              {"passed", report.passed()},
              {"rows", report.rows.size()},
              {"verdicts", std::move(verdicts)}};
  // NaN fields dump as null
  return doc.dump(2) + "\n";
}

void write_outputs(const SuiteReport& report, const ExperimentConfig& cfg) {
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, format_csv(report.rows));
  if (!cfg.plot_path.empty()) write_file(cfg.plot_path, format_csv(report.plot_rows));
  if (!cfg.json_path.empty()) {
    json doc = json::parse(format_report_json(report));
    doc["config"] = cfg.doc;
    write_file(cfg.json_path, doc.dump(2) + "\n");
  }
}

}  // namespace oscint
