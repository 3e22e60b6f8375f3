#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles/special.hpp"
#include "oscint/error.hpp"
#include "oscint/fit.hpp"
#include "oscint/quadrature.hpp"
#include "oscint/sublevel.hpp"

using namespace oscint;

namespace {

std::vector<DecaySample> power_law(double C, double delta, const std::vector<double>& lams) {
  std::vector<DecaySample> s;
  for (double l : lams) s.push_back({l, C * std::pow(l, -delta), 0.0});
  return s;
}

}  // namespace

TEST_CASE("fit_decay recovers an exact power law") {
  const auto lams = per_decade_grid(1e2, 1e6, 10);
  for (double delta : {0.0, 0.25, 1.0 / 3.0, 1.0}) {
    const auto fit = fit_decay(power_law(2.5, delta, lams));
    CHECK(std::abs(fit.delta_hat - delta) < 1e-10);
    CHECK(fit.C_hat == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.used == lams.size());
  }
}

TEST_CASE("fit_decay is invariant under rescaling") {
  const auto lams = per_decade_grid(1e2, 1e5, 8);
  std::vector<DecaySample> s, t;
  for (double l : lams) {
    const double m = std::pow(l, -0.4) * (1.0 + 0.3 * std::sin(l));
    s.push_back({l, m, 0.0});
    t.push_back({l, 7.0 * m, 0.0});
  }
  const auto a = fit_decay(s);
  const auto b = fit_decay(t);
  CHECK(std::abs(a.delta_hat - b.delta_hat) < 1e-12);
  CHECK(b.C_hat == doctest::Approx(7.0 * a.C_hat).epsilon(1e-12));
  CHECK(a.r_squared == doctest::Approx(b.r_squared).epsilon(1e-12));
}

TEST_CASE("fit_decay on oracle magnitudes") {
  std::vector<DecaySample> lin, fres;
  for (double l : per_decade_grid(1e2, 1e6, 25)) {
    lin.push_back({l, std::abs(oracle::linear_phase_integral(l)), 0.0});
    fres.push_back({l, std::abs(oracle::quadratic_phase_integral(l)), 0.0});
  }
  // 2|sin(lambda/2)|/lambda: the log|sin| scatter moves the slope by a few hundredths.
  CHECK(std::abs(fit_decay(lin).delta_hat - 1.0) < 0.03);
  CHECK(std::abs(fit_decay(fres).delta_hat - 0.5) < 0.02);
}

TEST_CASE("fit_decay preconditions") {
  const auto short_grid = per_decade_grid(1e2, 1e3, 10);
  CHECK_THROWS_AS(fit_decay(power_law(1.0, 0.5, short_grid)), Error);
  try {
    fit_decay(power_law(1.0, 0.5, per_decade_grid(1e2, 1e4, 1)));
    FAIL("expected insufficient span");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSpan);
  }
  auto noisy = power_law(1.0, 0.5, per_decade_grid(1e2, 1e6, 5));
  for (std::size_t i = 0; i < noisy.size(); i += 3) noisy[i].error = noisy[i].magnitude;
  try {
    fit_decay(noisy);
    FAIL("expected noise domination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoiseDominated);
  }
}

TEST_CASE("fit_log_model") {
  std::vector<std::pair<double, double>> exact, flat;
  for (double e : per_decade_grid(1e-6, 1e-1, 4)) {
    exact.push_back({e, e * (1.0 + std::log(1.0 / e))});
    flat.push_back({e, e});
  }
  const auto m = fit_log_model(exact, 1.0);
  CHECK(m.a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.b == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.r_squared == doctest::Approx(1.0));
  CHECK(std::abs(fit_log_model(flat, 1.0).b) < 1e-12);
  try {
    fit_log_model(std::span(exact).first(5), 1.0);
    FAIL("expected insufficient span");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSpan);
  }
}

TEST_CASE("default grid and fitting window") {
  const auto g = default_lambda_grid();
  CHECK(g.size() == 101);
  const auto w = fitting_window(g);
  CHECK(w.front() >= std::sqrt(10.0) * 1e2 * (1.0 - 1e-9));
  CHECK(w.front() < 4e2);
  CHECK(w.back() == 1e6);
}
