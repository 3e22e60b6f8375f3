// Command line front end: single integrals, sublevel measures, certificates,
// decay fits and the experiment suites.
//
// Exit status: 0 success, 1 a suite assertion failed, 2 bad input or config.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscint/cert.hpp"
#include "oscint/error.hpp"
#include "oscint/fit.hpp"
#include "oscint/harness.hpp"
#include "oscint/polynomial.hpp"
#include "oscint/quadrature.hpp"
#include "oscint/sublevel.hpp"

using namespace oscint;
using nlohmann::json;

namespace {

struct PhaseArgs {
  std::string family = "monomial";
  int n = 2;
  double coeff = 1.0;
  std::vector<double> coeffs;
  std::vector<double> interval{0.0, 1.0};
  std::string spec;  // JSON phase spec, overrides the rest

  void add(CLI::App* app) {
    app->add_option("--family", family, "monomial | polynomial")->capture_default_str();
    app->add_option("--n", n, "monomial degree")->capture_default_str();
    app->add_option("--coeff", coeff, "monomial coefficient")->capture_default_str();
    app->add_option("--coeffs", coeffs, "polynomial coefficients, constant term first");
    app->add_option("--interval", interval, "lo hi")->expected(2)->capture_default_str();
    app->add_option("--phase-json", spec, "phase as a JSON object, e.g. {\"family\":\"sine\",...}");
  }

  PhaseFunction build() const {
    if (!spec.empty()) return phase_from_json(json::parse(spec));
    json j = {{"family", family}, {"interval", interval}};
    if (family == "monomial") {
      j["n"] = n;
      j["coeff"] = coeff;
    } else {
      j["coeffs"] = coeffs;
    }
    return phase_from_json(j);
  }
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<DecaySample> read_samples(const std::string& path, const std::string& only_case) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, path + ": cannot open");
  std::string line;
  std::getline(in, line);
  // Accepts the suite CSV layout or plain "lambda,magnitude[,err]" files.
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  auto col = [&](const std::string& name, int fallback) {
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (head[i] == name) return static_cast<int>(i);
    }
    return fallback;
  };
  const int cl = col("lambda", 0), cm = col("magnitude", 1), ce = col("err_est", col("error", -1));
  const int cc = col("case", -1);
  std::vector<DecaySample> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    auto get = [&](int c) -> std::optional<double> {
      if (c < 0 || c >= static_cast<int>(cells.size()) || cells[static_cast<std::size_t>(c)].empty()) return std::nullopt;
      try {
        return std::stod(cells[static_cast<std::size_t>(c)]);
      } catch (const std::exception&) {
        fail(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": not a number");
      }
    };
    if (!only_case.empty() && (cc < 0 || cc >= static_cast<int>(cells.size()) ||
                               cells[static_cast<std::size_t>(cc)] != only_case)) {
      continue;
    }
    const auto l = get(cl), m = get(cm);
    if (!l || !m) continue;
    out.push_back({*l, *m, get(ce).value_or(0.0)});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillatory integral and sublevel set toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  // integrate
  auto* integ = app.add_subcommand("integrate", "integral of exp(i lambda P(f)) over an interval");
  PhaseArgs ip;
  ip.add(integ);
  std::vector<double> lambdas{1000.0};
  std::vector<double> outer;
  double rel_tol = 1e-10;
  integ->add_option("--lambda", lambdas, "one or more frequencies")->capture_default_str();
  integ->add_option("--outer", outer, "outer polynomial P, constant term first (default identity)");
  integ->add_option("--rel-tol", rel_tol)->capture_default_str();

  // sublevel
  auto* subl = app.add_subcommand("sublevel", "measure of {|f - c| <= eps}");
  PhaseArgs sp;
  sp.add(subl);
  double c = 0.0, eps = 1e-3;
  subl->add_option("--c", c)->capture_default_str();
  subl->add_option("--eps", eps)->capture_default_str();

  // certify
  auto* cert = app.add_subcommand("certify", "decay certificate for P(f)");
  PhaseArgs cp;
  cp.add(cert);
  std::vector<double> cert_P{0.0, 0.0, 0.5};
  double cert_lambda = 1e4, cert_delta = 0.5, cert_A = 1.0, abs_power = 0.0;
  int cert_N = 2;
  std::string cert_mode = "vdc";
  bool cert_verify = false;
  cert->add_option("--P", cert_P, "outer polynomial, constant term first")->capture_default_str();
  cert->add_option("--lambda", cert_lambda)->capture_default_str();
  cert->add_option("--mode", cert_mode, "vdc | general")->capture_default_str();
  cert->add_option("--N", cert_N)->capture_default_str();
  cert->add_option("--delta", cert_delta)->capture_default_str();
  cert->add_option("--A", cert_A)->capture_default_str();
  cert->add_option("--abs-power", abs_power, "use |t|^s as the outer function instead of P");
  cert->add_flag("--verify", cert_verify, "attach and check a quadrature value");

  // fit
  auto* fitc = app.add_subcommand("fit", "fit |I| ~ C lambda^-delta to a CSV");
  std::string fit_path;
  std::string fit_case;
  fitc->add_option("csv", fit_path)->required();
  fitc->add_option("--case", fit_case, "only rows of this case (suite CSV)");

  // suite
  auto* suite = app.add_subcommand("suite", "run an experiment suite");
  std::string suite_id, config = "default", out_dir;
  suite->add_option("id", suite_id)->required()->check(CLI::IsMember(suite_ids()));
  suite->add_option("--config", config, "default or a path")->capture_default_str();
  suite->add_option("--out-dir", out_dir, "prefix for the output paths in the config");

  // estimate-b
  auto* estb = app.add_subcommand("estimate-b", "empirical SND cover constant");
  int eb_d = 3, eb_trials = 10000;
  std::uint64_t eb_seed = 0;
  estb->add_option("--d", eb_d)->capture_default_str();
  estb->add_option("--trials", eb_trials)->capture_default_str();
  estb->add_option("--seed", eb_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*integ) {
      const PhaseFunction f = ip.build();
      const PhaseFunction g = outer.empty() ? f : composed_phase(Polynomial(outer), f);
      QuadConfig q;
      q.rel_tol = rel_tol;
      json rows = json::array();
      for (double l : lambdas) {
        const QuadResult r = osc_integrate_1d(g, l, f.domain(), q);
        rows.push_back({{"lambda", l},
                        {"re", r.value.real()},
                        {"im", r.value.imag()},
                        {"magnitude", std::abs(r.value)},
                        {"err_est", r.error_estimate},
                        {"panels", r.panels_used}});
      }
      print_json(rows);
    } else if (*subl) {
      const PhaseFunction f = sp.build();
      const auto r = sublevel_1d(f, c, eps, f.domain());
      json iv = json::array();
      for (const auto& i : r.components) iv.push_back(json::array({i.lo, i.hi}));
      print_json({{"measure", r.measure}, {"intervals", iv}});
    } else if (*cert) {
      const PhaseFunction f = cp.build();
      CertifyMode mode = cert_mode == "general" ? CertifyMode{GeneralMode{cert_delta, cert_A}} : CertifyMode{VdcMode{cert_N}};
      if (cert_mode != "general" && cert_mode != "vdc") fail(ErrorCode::Config, "--mode must be vdc or general");
      Certificate cf = abs_power > 0.0 ? certify_1d_abs_power(f, abs_power, cert_lambda, mode)
                                       : certify_1d(f, Polynomial(cert_P), cert_lambda, mode);
      if (cert_verify) {
        const PhaseFunction g = abs_power > 0.0 ? abs_power_phase(f, abs_power) : composed_phase(Polynomial(cert_P), f);
        const bool ok = verify(cf, osc_integrate_1d(g, cert_lambda, f.domain()));
        std::cout << to_json(cf) << "\n";
        return ok ? 0 : 1;
      }
      std::cout << to_json(cf) << "\n";
    } else if (*fitc) {
      const auto s = read_samples(fit_path, fit_case);
      const DecayFit d = fit_decay(s);
      print_json({{"delta_hat", d.delta_hat},
                  {"C_hat", d.C_hat},
                  {"r_squared", d.r_squared},
                  {"lambda_min", d.lambda_min},
                  {"lambda_max", d.lambda_max},
                  {"used", d.used}});
    } else if (*suite) {
      ExperimentConfig cfg = load_config(config, suite_id);
      if (!out_dir.empty()) {
        for (auto* p : {&cfg.csv_path, &cfg.json_path, &cfg.plot_path}) {
          if (!p->empty()) *p = out_dir + "/" + *p;
        }
      }
      const SuiteReport r = run_suite(cfg);
      write_outputs(r, cfg);
      for (const auto& v : r.verdicts) {
        std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " (criterion " << v.criterion << "): " << v.detail
                  << "\n";
        if (!v.pass && !v.witness.is_null()) std::cout << "  witness " << v.witness.dump() << "\n";
      }
      std::cout << r.suite << (r.passed() ? " passed" : " FAILED") << "\n";
      return r.passed() ? 0 : 1;
    } else if (*estb) {
      EstimateBOptions o;
      o.threads = 0;
      const SndConstant b = estimate_B(eb_d, eb_trials, eb_seed, o);
      print_json({{"d", b.d}, {"B", b.B}, {"trials", eb_trials}, {"seed", eb_seed}});
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
