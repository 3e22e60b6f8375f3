#include <cmath>
#include <random>

#include <json.hpp>

#include "doctest.h"
#include "oscint/cert.hpp"
#include "oscint/error.hpp"
#include "oscint/fit.hpp"
#include "oscint/sublevel.hpp"

using namespace oscint;

namespace {

PhaseFunction vdc_monomial(int n, double lower) {
  PhaseMeta m;
  m.N = n;
  m.derivative_lower_bound = lower;
  return monomial_phase(n, {0.0, 1.0}).with_meta(m);
}

// Exponent of the certificate totals over a lambda sweep.
double total_exponent(const std::function<Certificate(double)>& make, double lo, double hi, int per_decade) {
  std::vector<DecaySample> s;
  for (double l : per_decade_grid(lo, hi, per_decade)) s.push_back({l, make(l).total_bound, 0.0});
  return fit_decay(s).delta_hat;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("derivpush and ibp plug-in values") {
  for (double r : {1e-3, 0.25, 2.0}) CHECK(derivpush_bound(2.0, 0.5, r) == doctest::Approx(2.0 * r).epsilon(1e-14));
  CHECK(derivpush_bound(1.0, 0.5, 0.25) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(ibp_bound(1.0, 1.0, 2, 6.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ibp_bound(0.3, 0.2, 3, 2e4) == doctest::Approx(0.5 * ibp_bound(0.3, 0.2, 3, 1e4)).epsilon(1e-14));
  CHECK(ibp_bound(0.3, 0.2, 3, -1e4) == ibp_bound(0.3, 0.2, 3, 1e4));
}

TEST_CASE("derivpush bounds the length of intervals with small derivative") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double delta = 0.5;
  for (int trial = 0; trial < 20; ++trial) {
    const double r = 0.05 + U(rng);
    const double L = 0.2 + 2.0 * U(rng);
    const double a = 3.0 * U(rng);
    // f' = r (1 + a x^2) / (1 + a L^2) is positive, increasing and at most r on [0, L].
    const double scale = r / (1.0 + a * L * L);
    const auto f = polynomial_phase(Polynomial({0.0, scale, 0.0, scale * a / 3.0}), {0.0, L});
    // Measured sublevel constant, including the height and width the proof uses.
    double B = 0.0;
    std::vector<double> cs{f(0.5 * L)};
    for (int k = 0; k <= 20; ++k) cs.push_back(f(L * k / 20.0));
    std::vector<double> alphas = per_decade_grid(1e-6, 10.0, 5);
    alphas.push_back(L * r / 2.0);
    for (double c : cs) {
      for (double al : alphas) B = std::max(B, sublevel_1d(f, c, al, {0.0, L}).measure / std::pow(al, delta));
    }
    CHECK(L <= derivpush_bound(B, delta, r) * (1.0 + 1e-12));
  }
}

TEST_CASE("ibp bound dominates the integral on a good interval") {
  // f = x^2 on [1, 2]: f' >= 2, P = t^2 / 2 so P'(f) = f >= 1.
  const auto f = monomial_phase(2, {1.0, 2.0});
  const auto g = composed_phase(Polynomial({0.0, 0.0, 0.5}), f);
  for (double lam : {1.0, 10.0, 300.0, 1e4}) {
    const auto q = osc_integrate_1d(g, lam, {1.0, 2.0});
    CHECK(std::abs(q.value) <= ibp_bound(2.0, 1.0, 2, lam));
  }
}

TEST_CASE("certify_1d preconditions") {
  const auto f = vdc_monomial(2, 2.0);
  CHECK(code_of([&] { certify_1d(f, Polynomial({0.0, 1.0}), 1e3, VdcMode{2}); }) == ErrorCode::Precondition);
  CHECK(code_of([&] { certify_1d(f, Polynomial({0.0, 0.0, 1.0}), 1e3, VdcMode{2}); }) ==
        ErrorCode::NotNormalized);
  const Polynomial snd({0.0, -0.2, 0.5, 0.1});  // P' = 0.3 t^2 + t - 0.2
  CHECK(code_of([&] { certify_1d(f, snd, 0.5, VdcMode{2}); }) == ErrorCode::Precondition);
  const auto undeclared = sine_phase(std::nullopt, 1.0, 1.0, 0.0, {0.0, 1.0});
  CHECK(code_of([&] { certify_1d(undeclared, Polynomial({0.0, 0.0, 0.5}), 1e3, VdcMode{2}); }) ==
        ErrorCode::Precondition);
  CHECK(code_of([&] { certify_1d(f, Polynomial({0.0, 0.0, 0.5}), 1e3, GeneralMode{0.5, 0.5}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("certify_1d vdc, f = x^2, P = t^2/2") {
  const auto f = vdc_monomial(2, 2.0);
  const Polynomial P({0.0, 0.0, 0.5});
  const auto g = composed_phase(P, f);
  for (double lam : {1e2, 1e3, 1e4, -1e4}) {
    auto cert = certify_1d(f, P, lam, VdcMode{2});
    CHECK(cert.params.epsilon == doctest::Approx(std::pow(std::abs(lam), -0.5)));
    CHECK(cert.params.r == doctest::Approx(std::pow(std::abs(lam), -0.25)));
    CHECK(cert.covered_length() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.inclusion_violations == 0);
    CHECK(verify(cert, osc_integrate_1d(g, lam, {0.0, 1.0})));
  }
  const double C = certify_1d(f, P, 1e2, VdcMode{2}).total_bound * std::pow(1e2, 0.25);
  CHECK(certify_1d(f, P, 1e4, VdcMode{2}).total_bound <= C * std::pow(1e4, -0.25) * 1.01);
  const double e = total_exponent([&](double l) { return certify_1d(f, P, l, VdcMode{2}); }, 1e2, 1e6, 4);
  CHECK(std::abs(e - 0.25) < 0.02);
}

TEST_CASE("certify_1d vdc, f = x^3, SND quadratic P'") {
  const auto f = vdc_monomial(3, 6.0);
  const Polynomial P({0.0, -0.2, 0.5, 0.1});
  const auto g = composed_phase(P, f);
  auto cert = certify_1d(f, P, 1e3, VdcMode{3});
  CHECK(cert.params.B_cover >= 1.0);
  CHECK(verify(cert, osc_integrate_1d(g, 1e3, {0.0, 1.0})));
  CHECK(cert.covered_length() == doctest::Approx(1.0).epsilon(1e-12));
  // Below lambda ~ 1e4 the cover radius B eps is comparable to the distance
  // from the root to the ends of [0, 1] and the piece structure still changes.
  const double e = total_exponent([&](double l) { return certify_1d(f, P, l, VdcMode{3}); }, 1e4, 1e8, 4);
  CHECK(std::abs(e - 1.0 / 9.0) < 0.02);
}

TEST_CASE("certify_1d general mode") {
  const auto f = monomial_phase(2, {0.0, 1.0});
  const double A = estimate_oscillatory_constant(f, 0.5, {0.0, 1.0}, per_decade_grid(1e-2, 1e5, 5));
  const Polynomial P({0.0, 0.0, 0.5});
  const auto g = composed_phase(P, f);
  for (double lam : {1e2, 1e4, 1e6}) {
    auto cert = certify_1d(f, P, lam, GeneralMode{0.5, A});
    CHECK(cert.params.r == doctest::Approx(std::pow(lam, -0.25)));
    CHECK(cert.covered_length() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(verify(cert, osc_integrate_1d(g, lam, {0.0, 1.0})));
  }
  const double e =
      total_exponent([&](double l) { return certify_1d(f, P, l, GeneralMode{0.5, A}); }, 1e2, 1e6, 4);
  CHECK(std::abs(e - 0.25) < 0.02);
}

TEST_CASE("vdc mode with N = 1 has no small-derivative pieces") {
  PhaseMeta m;
  m.N = 1;
  m.derivative_lower_bound = 1.0;
  const auto f = polynomial_phase(Polynomial({0.0, 1.0, 0.5}), {0.0, 1.0}).with_meta(m);
  const Polynomial P({0.0, -0.3, 0.5});
  auto cert = certify_1d(f, P, 1e4, VdcMode{1});
  CHECK(cert.bound_of(PieceKind::SmallDerivative) == 0.0);
  for (const auto& p : cert.pieces) CHECK(p.kind != PieceKind::SmallDerivative);
  CHECK(verify(cert, osc_integrate_1d(composed_phase(P, f), 1e4, {0.0, 1.0})));
}

TEST_CASE("|t|^s outer transform") {
  const auto f = vdc_monomial(2, 2.0);
  const auto g = abs_power_phase(f, 1.5);
  for (double lam : {1e2, 1e4}) {
    auto cert = certify_1d_abs_power(f, 1.5, lam, VdcMode{2});
    CHECK(cert.inclusion_violations == 0);
    CHECK(verify(cert, osc_integrate_1d(g, lam, {0.0, 1.0})));
  }
  const double e =
      total_exponent([&](double l) { return certify_1d_abs_power(f, 1.5, l, VdcMode{2}); }, 1e2, 1e6, 4);
  CHECK(std::abs(e - 1.0 / 3.0) < 0.02);
}

TEST_CASE("certify_2d on xy") {
  const Rect box{{0.0, 1.0}, {0.0, 1.0}};
  const auto X = PlanarDomain::rectangle(box.x, box.y);
  const auto xy = bipoly_phase({{0.0, 0.0}, {0.0, 1.0}}, box, {1, 1});
  CertifyOptions opt;
  opt.slice_samples = 16;

  const Polynomial id({0.0, 1.0});
  auto c1 = certify_2d(xy, X, id, 1e4, opt);
  REQUIRE(c1.params.gamma);
  CHECK(*c1.params.gamma == doctest::Approx(1e-2));
  CHECK(verify(c1, osc_integrate_2d_levelset(xy, 1e4, X)));
  const double e1 = total_exponent([&](double l) { return certify_2d(xy, X, id, l, opt); }, 1e2, 1e5, 3);
  CHECK(std::abs(e1 - 0.5) < 0.02);

  const Polynomial half({0.0, 0.0, 0.5});
  const auto g = composed_phase_2d(half, xy);
  for (double lam : {1e2, 1e3}) {
    auto c2 = certify_2d(xy, X, half, lam, opt);
    CHECK(c2.inclusion_violations == 0);
    CHECK(verify(c2, osc_integrate_2d_levelset(g, lam, X)));
  }
  const double e2 = total_exponent([&](double l) { return certify_2d(xy, X, half, l, opt); }, 1e2, 1e5, 3);
  CHECK(e2 >= 0.25 - 0.05);

  const Polynomial snd({0.0, -0.2, 0.5, 0.1});
  CHECK(code_of([&] { certify_2d(xy, X, snd, 0.5, opt); }) == ErrorCode::Precondition);
  const auto weak = bipoly_phase({{0.0, 0.0}, {0.0, 0.5}}, box, {1, 1});
  CHECK(code_of([&] { certify_2d(weak, X, id, 1e3, opt); }) == ErrorCode::Precondition);
}

TEST_CASE("certificate serializes every piece") {
  const auto f = vdc_monomial(2, 2.0);
  const Polynomial P({0.0, 0.0, 0.5});
  auto cert = certify_1d(f, P, 1e3, VdcMode{2});
  verify(cert, osc_integrate_1d(composed_phase(P, f), 1e3, {0.0, 1.0}));
  const auto j = nlohmann::json::parse(to_json(cert));
  CHECK(j["pieces"].size() == cert.pieces.size());
  CHECK(j["total_bound"].get<double>() == doctest::Approx(cert.total_bound));
  CHECK(j["verified_against"]["sound"].get<bool>());
  for (const auto& p : j["pieces"]) {
    CHECK(p.contains("kind"));
    CHECK(p.contains("formula"));
    CHECK(p["bound"].get<double>() >= 0.0);
  }
}
