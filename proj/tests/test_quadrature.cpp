#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles/special.hpp"
#include "oscint/error.hpp"
#include "oscint/quadrature.hpp"

using namespace oscint;

namespace {

double rel_err(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("quadratic phase matches the Fresnel closed form") {
  const auto g = monomial_phase(2, {0.0, 1.0});
  for (double lam : {1e2, 1e3, 1e4, 1e5}) {
    const auto r = osc_integrate_1d(g, lam, {0.0, 1.0});
    const auto ref = oracle::quadratic_phase_integral(lam);
    CHECK(rel_err(r.value, ref) < 1e-8);
    CHECK(r.error_estimate < 1e-7 * std::abs(ref));
  }
}

TEST_CASE("linear phase matches the closed form") {
  const auto g = monomial_phase(1, {0.0, 1.0});
  for (double lam : {1e2, 1e3, 1e4, 1e5}) {
    const auto r = osc_integrate_1d(g, lam, {0.0, 1.0});
    CHECK(rel_err(r.value, oracle::linear_phase_integral(lam)) < 1e-8);
  }
  const auto full = osc_integrate_1d(g, 2.0 * std::numbers::pi, {0.0, 1.0});
  CHECK(std::abs(full.value) < 1e-13);
}

TEST_CASE("lambda zero returns the length") {
  const auto g = sine_phase(std::nullopt, 1.0, 3.0, 0.0, {-1.0, 2.0});
  const auto r = osc_integrate_1d(g, 0.0, {-1.0, 2.0});
  CHECK(r.value == std::complex<double>(3.0, 0.0));
  CHECK(r.error_estimate == 0.0);
}

TEST_CASE("negative lambda gives the conjugate") {
  const auto g = polynomial_phase(Polynomial({0.3, -1.0, 0.0, 2.0}), {-1.0, 1.5});
  for (double lam : {3.0, 170.0, 4e3}) {
    const auto p = osc_integrate_1d(g, lam, {-1.0, 1.5});
    const auto m = osc_integrate_1d(g, -lam, {-1.0, 1.5});
    CHECK(std::abs(p.value - std::conj(m.value)) < 1e-12);
  }
}

TEST_CASE("additivity over a split interval and the trivial bound") {
  const auto g = polynomial_phase(Polynomial({0.0, 0.5, -2.0, 0.0, 1.0}), {-2.0, 2.0});
  for (double lam : {10.0, 500.0, 2e4}) {
    const auto whole = osc_integrate_1d(g, lam, {-2.0, 2.0});
    const auto left = osc_integrate_1d(g, lam, {-2.0, 0.37});
    const auto right = osc_integrate_1d(g, lam, {0.37, 2.0});
    CHECK(std::abs(whole.value - (left.value + right.value)) < 1e-10);
    CHECK(std::abs(whole.value) <= 4.0 + whole.error_estimate);
  }
}

TEST_CASE("tighter tolerance does not increase the error estimate") {
  const auto g = sine_phase(Polynomial({0.0, 0.0, 1.0}), 0.2, 7.0, 0.1, {0.0, 2.0});
  QuadConfig loose;
  loose.rel_tol = 1e-6;
  QuadConfig tight;
  tight.rel_tol = 1e-12;
  const auto a = osc_integrate_1d(g, 300.0, {0.0, 2.0}, loose);
  const auto b = osc_integrate_1d(g, 300.0, {0.0, 2.0}, tight);
  CHECK(b.error_estimate <= a.error_estimate);
  CHECK(b.panels_used >= a.panels_used);
  CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-14);
}

TEST_CASE("domain and panel budget errors") {
  const auto g = monomial_phase(2, {0.0, 1.0});
  try {
    osc_integrate_1d(g, 10.0, {0.0, 1.5});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  QuadConfig small;
  small.max_panels = 100;
  try {
    osc_integrate_1d(g, 1e6, {0.0, 1.0}, small);
    FAIL("expected a panel budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PanelBudget);
  }
}

TEST_CASE("real adaptive quadrature") {
  const auto r = integrate_real([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CompensatedSum s;
  s.add(1.0);
  s.add(1e-17);
  s.add(-1.0);
  CHECK(s.value() == 1e-17);
}

TEST_CASE("2D nested route: separable and bilinear phases") {
  const Rect box{{0.0, 1.0}, {0.0, 1.0}};
  const auto X = PlanarDomain::rectangle(box.x, box.y);
  const auto sum = bipoly_phase({{0.0, 1.0}, {1.0, 0.0}}, box, {1, 0});
  for (double lam : {5.0, 60.0}) {
    const auto r = osc_integrate_2d(sum, lam, X);
    const auto one = oracle::linear_phase_integral(lam);
    CHECK(rel_err(r.value, one * one) < 1e-8);
  }
  const auto xy = bipoly_phase({{0.0, 0.0}, {0.0, 1.0}}, box, {1, 1});
  for (double lam : {1.0, 10.0, 100.0}) {
    const auto r = osc_integrate_2d(xy, lam, X);
    CHECK(rel_err(r.value, oracle::bilinear_phase_integral(lam)) < 1e-7);
  }
  CHECK(osc_integrate_2d(xy, 0.0, X).value == std::complex<double>(1.0, 0.0));
}

TEST_CASE("level-set route matches the bilinear closed form at large lambda") {
  const Rect box{{0.0, 1.0}, {0.0, 1.0}};
  const auto X = PlanarDomain::rectangle(box.x, box.y);
  const auto xy = bipoly_phase({{0.0, 0.0}, {0.0, 1.0}}, box, {1, 1});
  const LevelSetIntegrator ls(xy, X);
  for (double t : {0.0, 1e-6, 0.3, 0.9, 1.0}) {
    CHECK(std::abs(ls.distribution(t) - ls.distribution_direct(t)) < 1e-12);
  }
  // M(t) = t (1 - ln t) for xy on the unit square.
  CHECK(ls.distribution_direct(0.25) == doctest::Approx(0.25 * (1.0 - std::log(0.25))).epsilon(1e-13));
  for (double lam : {1.0, 100.0, 1e4, 1e5, 1e6}) {
    const auto r = ls.integrate(lam);
    const auto ref = oracle::bilinear_phase_integral(lam);
    CHECK(rel_err(r.value, ref) < 1e-7);
    CHECK(std::abs(r.value - ref) <= r.error_estimate);
  }
  CHECK(ls.integrate(0.0).value == std::complex<double>(1.0, 0.0));
}

TEST_CASE("level-set and nested routes agree") {
  const Rect box{{0.0, 1.0}, {0.0, 1.0}};
  const auto X = PlanarDomain({{{0.0, 1.0}, {0.0, 0.5}}, {{0.0, 0.5}, {0.5, 1.0}}}, 1);
  // x^3 y^2 + 0.2 x
  const auto g = bipoly_phase({{0.0}, {0.2}, {0.0}, {0.0, 0.0, 1.0}}, box, {3, 2});
  const LevelSetIntegrator ls(g, X);
  for (double lam : {3.0, 80.0, 1e3}) {
    const auto a = ls.integrate(lam);
    const auto b = osc_integrate_2d(g, lam, X);
    CHECK(std::abs(a.value - b.value) < 1e-8);
  }
}

TEST_CASE("level-set route rejects phases that turn in y") {
  const Rect box{{0.0, 1.0}, {-1.0, 1.0}};
  const auto g = bipoly_phase({{0.0, 0.0, 1.0}}, box, {0, 2});
  try {
    LevelSetIntegrator ls(g, PlanarDomain::rectangle(box.x, box.y));
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
}
