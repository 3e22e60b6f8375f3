#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "internal.hpp"
#include "oscint/error.hpp"
#include "oscint/harness.hpp"

#ifndef OSCINT_VERSION
#define OSCINT_VERSION "0.0.0"
#endif
#ifndef OSCINT_SOURCE_CONFIG_DIR
#define OSCINT_SOURCE_CONFIG_DIR "configs"
#endif

namespace oscint {

namespace fs = std::filesystem;
using nlohmann::json;

namespace harness_detail {

int line_of(const std::string& text, const std::string& needle) {
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

void config_fail(const ExperimentConfig& cfg, const std::string& key, const std::string& msg) {
  const int line = line_of(cfg.text, "\"" + key + "\"");
  std::string where = cfg.origin;
  if (line > 0) where += ":" + std::to_string(line);
  fail(ErrorCode::Config, where + ": " + msg);
}

double number_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

std::string case_name(const json& c) { return c.value("name", std::string("unnamed")); }

GridSpec grid_spec(const ExperimentConfig& cfg, const json& parent, const std::string& key, GridSpec fallback) {
  if (!parent.contains(key)) return fallback;
  const json& g = parent.at(key);
  if (!g.is_object()) config_fail(cfg, key, key + " must be an object {lo, hi, per_decade}");
  GridSpec s = fallback;
  try {
    s.lo = number_or(g, "lo", s.lo);
    s.hi = number_or(g, "hi", s.hi);
    s.per_decade = static_cast<int>(number_or(g, "per_decade", s.per_decade));
  } catch (const json::exception&) {
    config_fail(cfg, key, key + " fields must be numbers");
  }
  if (!(s.lo > 0.0) || !(s.hi >= s.lo) || s.per_decade < 1) {
    config_fail(cfg, key, key + " needs 0 < lo <= hi and per_decade >= 1");
  }
  return s;
}

}  // namespace harness_detail

using namespace harness_detail;

namespace {

Interval interval_of(const json& spec) {
  const auto& iv = spec.at("interval");
  require(iv.is_array() && iv.size() == 2, ErrorCode::InvalidArgument, "interval must be [lo, hi]");
  return make_interval(iv[0].get<double>(), iv[1].get<double>());
}

std::optional<Polynomial> optional_poly(const json& spec, const char* key) {
  if (!spec.contains(key) || spec.at(key).is_null()) return std::nullopt;
  return Polynomial(spec.at(key).get<std::vector<double>>());
}

json read_json_file(const fs::path& path, std::string* text_out) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text_out) *text_out = text;
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    fail(ErrorCode::Config, path.string() + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
}

json resolve_includes(json doc, const fs::path& base_dir, int depth) {
  if (!doc.is_object()) return doc;
  if (!doc.contains("include")) return doc;
  if (depth > 8) fail(ErrorCode::Config, "include nesting deeper than 8 (cycle?)");
  json inc = doc.at("include");
  doc.erase("include");
  if (inc.is_string()) inc = json::array({inc});
  if (!inc.is_array()) fail(ErrorCode::Config, "include must be a file name or a list of file names");
  json merged = json::object();
  for (const auto& name : inc) {
    if (!name.is_string()) fail(ErrorCode::Config, "include entries must be strings");
    const fs::path p = base_dir / name.get<std::string>();
    merged.merge_patch(resolve_includes(read_json_file(p, nullptr), p.parent_path(), depth + 1));
  }
  merged.merge_patch(doc);
  return merged;
}

void validate_cases(const ExperimentConfig& cfg) {
  if (!cfg.doc.contains("cases")) return;
  const json& cases = cfg.doc.at("cases");
  if (!cases.is_array()) config_fail(cfg, "cases", "cases must be a list");
  for (const auto& c : cases) {
    const std::string name = case_name(c);
    auto bad = [&](const std::string& what) {
      const int line = line_of(cfg.text, "\"" + name + "\"");
      fail(ErrorCode::Config, cfg.origin + (line > 0 ? ":" + std::to_string(line) : "") + ": case " + name + ": " +
                                  what);
    };
    try {
      if (c.contains("phase")) phase_from_json(c.at("phase"));
      if (c.contains("phase2d")) phase2d_from_json(c.at("phase2d"));
      if (c.contains("f")) phase_from_json(c.at("f"));
      if (c.contains("g")) phase_from_json(c.at("g"));
      if (c.contains("P")) Polynomial(c.at("P").get<std::vector<double>>());
    } catch (const Error& e) {
      bad(e.what());
    } catch (const json::exception& e) {
      bad(e.what());
    }
  }
}

}  // namespace

PhaseFunction phase_from_json(const json& spec) {
  try {
    require(spec.is_object(), ErrorCode::InvalidArgument, "phase spec must be an object");
    const std::string fam = spec.at("family").get<std::string>();
    const Interval I = interval_of(spec);
    PhaseFunction f = [&]() -> PhaseFunction {
      if (fam == "monomial") return monomial_phase(spec.at("n").get<int>(), I, spec.value("coeff", 1.0));
      if (fam == "polynomial") return polynomial_phase(Polynomial(spec.at("coeffs").get<std::vector<double>>()), I);
      if (fam == "sine") {
        return sine_phase(optional_poly(spec, "base"), spec.at("amp").get<double>(), spec.at("freq").get<double>(),
                          spec.value("shift", 0.0), I);
      }
      if (fam == "exp") {
        return exp_phase(optional_poly(spec, "base"), spec.at("amp").get<double>(), spec.at("rate").get<double>(), I);
      }
      fail(ErrorCode::InvalidArgument, "unknown phase family '" + fam + "'");
    }();
    if (spec.contains("N") || spec.contains("lower_bound")) {
      PhaseMeta m = f.meta();
      if (spec.contains("N")) m.N = spec.at("N").get<int>();
      if (spec.contains("lower_bound")) m.derivative_lower_bound = spec.at("lower_bound").get<double>();
      f = f.with_meta(m);
    }
    return f;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("phase spec: ") + e.what());
  }
}

Phase2D phase2d_from_json(const json& spec) {
  try {
    require(spec.is_object(), ErrorCode::InvalidArgument, "2D phase spec must be an object");
    const std::string fam = spec.at("family").get<std::string>();
    const auto beta = spec.value("beta", std::array<int, 2>{1, 1});
    if (fam == "bipoly") {
      const auto& r = spec.at("rect");
      const Rect box{make_interval(r.at(0).at(0).get<double>(), r.at(0).at(1).get<double>()),
                     make_interval(r.at(1).at(0).get<double>(), r.at(1).at(1).get<double>())};
      return bipoly_phase(spec.at("coeffs").get<std::vector<std::vector<double>>>(), box, beta);
    }
    if (fam == "product") return product_phase(phase_from_json(spec.at("f")), phase_from_json(spec.at("g")), beta);
    fail(ErrorCode::InvalidArgument, "unknown 2D phase family '" + fam + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("2D phase spec: ") + e.what());
  }
}

std::vector<std::string> suite_ids() { return {"T1", "T2", "T3", "T4", "T5", "T6", "T7", "H-LOG"}; }

std::string version_string() { return OSCINT_VERSION; }

std::string default_config_dir() {
  if (const char* env = std::getenv("OSCINT_CONFIG_DIR")) return env;
  return OSCINT_SOURCE_CONFIG_DIR;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  cfg.origin = origin;
  cfg.text = text;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    fail(ErrorCode::Config, origin + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) fail(ErrorCode::Config, origin + ":1: config must be a JSON object");
  cfg.doc = resolve_includes(std::move(doc), fs::path(origin).parent_path(), 0);

  const json& d = cfg.doc;
  try {
    if (!d.contains("suite") || !d.at("suite").is_string()) config_fail(cfg, "suite", "missing string field suite");
    cfg.suite = d.at("suite").get<std::string>();
    const auto ids = suite_ids();
    if (std::find(ids.begin(), ids.end(), cfg.suite) == ids.end()) {
      config_fail(cfg, "suite", "unknown suite '" + cfg.suite + "'");
    }
    if (d.contains("seed")) {
      if (!d.at("seed").is_number_unsigned()) config_fail(cfg, "seed", "seed must be a nonnegative integer");
      cfg.seed = d.at("seed").get<std::uint64_t>();
    }
    if (d.contains("threads")) {
      if (!d.at("threads").is_number_integer() || d.at("threads").get<int>() < 0) {
        config_fail(cfg, "threads", "threads must be a nonnegative integer");
      }
      cfg.threads = d.at("threads").get<int>();
    }
    if (d.contains("output")) {
      const json& o = d.at("output");
      if (!o.is_object()) config_fail(cfg, "output", "output must be an object {csv, json, plot}");
      cfg.csv_path = o.value("csv", std::string());
      cfg.json_path = o.value("json", std::string());
      cfg.plot_path = o.value("plot", std::string());
    }
    if (d.contains("quad")) {
      const json& q = d.at("quad");
      if (!q.is_object()) config_fail(cfg, "quad", "quad must be an object");
      cfg.quad.rel_tol = number_or(q, "rel_tol", cfg.quad.rel_tol);
      cfg.quad.max_panels = static_cast<std::int64_t>(number_or(q, "max_panels", static_cast<double>(cfg.quad.max_panels)));
      cfg.quad.phase_variation_cap = number_or(q, "phase_variation_cap", cfg.quad.phase_variation_cap);
      cfg.quad.partition_density = number_or(q, "partition_density", cfg.quad.partition_density);
      try {
        cfg.quad.validate();
      } catch (const Error& e) {
        config_fail(cfg, "quad", e.what());
      }
    }
    for (const auto& [key, value] : d.items()) {
      if (key.size() > 5 && key.compare(key.size() - 5, 5, "_grid") == 0) grid_spec(cfg, d, key, {});
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, origin + ": " + e.what());
  }
  validate_cases(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& suite) {
  fs::path p = path;
  if (path == "default") p = fs::path(default_config_dir()) / (suite + ".json");
  std::string text;
  read_json_file(p, &text);
  ExperimentConfig cfg = parse_config(text, p.string());
  if (!suite.empty() && cfg.suite != suite) {
    config_fail(cfg, "suite", "config is for suite " + cfg.suite + ", not " + suite);
  }
  return cfg;
}

}  // namespace oscint
