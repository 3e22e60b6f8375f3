#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oscint/error.hpp"
#include "oscint/polynomial.hpp"

using namespace oscint;

namespace {

bool dense_grid_covered(const Polynomial& p, double eps, const std::vector<double>& centers,
                        double radius, int n = 10000) {
  // Grid spans every point where |P| could be small: the root bound plus margin.
  double bound = 1.0;
  const auto& a = p.coeffs();
  for (std::size_t k = 0; k + 1 < a.size(); ++k) bound = std::max(bound, 1.0 + std::abs(a[k] / a.back()));
  bound += radius;
  const double level = std::pow(eps, p.degree());
  for (int i = 0; i <= n; ++i) {
    const double x = -bound + 2.0 * bound * i / n;
    if (std::abs(p(x)) > level) continue;
    bool hit = false;
    for (double c : centers) hit = hit || std::abs(x - c) <= radius * (1 + 1e-12) + 1e-12;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("construction trims zeros and rejects the zero polynomial") {
  CHECK(Polynomial({1.0, 2.0, 0.0, 0.0}).degree() == 1);
  CHECK_THROWS_AS(Polynomial({0.0, 0.0}), Error);
  CHECK(Polynomial::monomial(3, 2.0).coeffs() == std::vector<double>{0, 0, 0, 2});
}

TEST_CASE("derivative") {
  CHECK(derivative(Polynomial({0, 0, 0, 1})).coeffs() == std::vector<double>{0, 0, 3});
  CHECK(derivative(Polynomial({0, 5, 0.5})).coeffs() == std::vector<double>{5, 1});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> c(7);
  for (auto& v : c) v = u(rng);
  const Polynomial p(c);
  const Polynomial dp = derivative(p);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng);
    const double h = 1e-5;
    const double fd = (p(x + h) - p(x - h)) / (2 * h);
    CHECK(std::abs(fd - dp(x)) <= 1e-8);
  }
}

TEST_CASE("batched eval agrees with pointwise") {
  const Polynomial p({0.3, -1.0, 0.5, 2.0, -0.25});
  std::vector<double> xs(37), out(37);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -1.2 + 0.07 * i;
  p.eval(xs, out);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == doctest::Approx(p(xs[i])).epsilon(1e-14));
}

TEST_CASE("roots of small cases") {
  auto r = roots(Polynomial({-1, 0, 1})).real_parts();
  std::sort(r.begin(), r.end());
  CHECK(r[0] == doctest::Approx(-1.0));
  CHECK(r[1] == doctest::Approx(1.0));
  const auto z = roots(Polynomial({1, 0, 1})).roots;
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0].real()) < 1e-15);
  CHECK(std::abs(std::abs(z[0].imag()) - 1.0) < 1e-15);
  CHECK(z[0] == std::conj(z[1]));
  const auto zz = roots(Polynomial({0, 0, 0, 1})).roots;
  CHECK(zz.size() == 3);
  for (auto v : zz) CHECK(v == std::complex<double>(0.0));
}

TEST_CASE("roots oracle x^5 - 2x^3 + x - 3") {
  // Reference values from an independent eigenvalue computation.
  const std::vector<std::complex<double>> expected{
      {-1.27340913844204, 0.56382109282912},
      {-1.27340913844204, -0.56382109282912},
      {0.5, 0.86602540378444},
      {0.5, -0.86602540378444},
      {1.54681827688408, 0.0}};
  const Polynomial p({-3, 1, 0, -2, 0, 1});
  for (bool companion : {false, true}) {
    RootOptions opt;
    opt.force_companion = companion;
    const auto rs = roots(p, opt);
    REQUIRE(rs.roots.size() == 5);
    for (const auto& e : expected) {
      double best = 1e9;
      for (const auto& z : rs.roots) best = std::min(best, std::abs(z - e));
      CHECK(best < 1e-10);
    }
    for (const auto& z : rs.roots) CHECK(std::abs(p(z)) <= rs.residual_tol * (1 + p.max_abs_coeff()));
  }
}

TEST_CASE("roots residual property on random polynomials") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 300; ++t) {
    const int d = 1 + t % 12;
    std::vector<double> c(d + 1);
    for (auto& v : c) v = u(rng);
    const Polynomial p(c);
    const auto rs = roots(p);
    CHECK(static_cast<int>(rs.roots.size()) == p.degree());
    for (const auto& z : rs.roots) CHECK(std::abs(p(z)) <= rs.residual_tol * (1 + p.max_abs_coeff()));
  }
}

TEST_CASE("multiple roots") {
  // (x - 1)^4 (x + 2)
  const Polynomial p = Polynomial({-1, 1}) * Polynomial({-1, 1}) * Polynomial({-1, 1}) *
                       Polynomial({-1, 1}) * Polynomial({2, 1});
  const auto rs = roots(p);
  int near_one = 0;
  for (auto z : rs.roots) near_one += std::abs(z - 1.0) < 1e-3;
  CHECK(near_one == 4);
}

TEST_CASE("classify") {
  const auto a = classify(Polynomial({0, 0.5, 0, 1}));
  CHECK(a.kind == PolyClass::Monic);
  CHECK(a.snd);
  CHECK(*a.attaining_j == 0);
  const auto b = classify(Polynomial({0.1, 0, 1, 0.5}));
  CHECK(b.kind == PolyClass::Snd);
  CHECK(*b.attaining_j == 1);
  const auto c = classify(Polynomial({0, 1, 0.2, 0.1}));
  CHECK(c.kind == PolyClass::Other);
  CHECK(*c.attaining_j == 2);
  const auto scaled = classify(Polynomial({0.1, 0, 1, 0.3}).scaled(2.0));
  CHECK(scaled.kind == PolyClass::Other);
  CHECK(scaled.rescale == doctest::Approx(0.5));
  CHECK(scaled.report.find("0.5") != std::string::npos);
}

TEST_CASE("young_cover") {
  const std::vector<SublevelFactor> two{{1, 1}, {1, 1}};
  const auto y = young_cover(two, 0.01);
  CHECK(y.delta == doctest::Approx(0.5));
  CHECK(y.C == doctest::Approx(2.0));
  CHECK(y.thresholds[0] == doctest::Approx(0.1));
  CHECK(y.exponents[1] == doctest::Approx(2.0));
  const std::vector<SublevelFactor> halves{{1, 0.5}, {1, 0.5}};
  CHECK(young_cover(halves, 0.1).delta == doctest::Approx(0.25));
  const std::vector<SublevelFactor> three{{1, 1}, {1, 1}, {1, 1}};
  const auto t = young_cover(three, 0.008);
  CHECK(t.delta == doctest::Approx(1.0 / 3));
  CHECK(t.thresholds[2] == doctest::Approx(0.2));
  const std::vector<SublevelFactor> bad{{1, 1.5}};
  CHECK_THROWS_AS(young_cover(bad, 0.1), Error);
}

TEST_CASE("young_cover inclusion by direct evaluation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int k = 2 + t % 3;
    std::vector<SublevelFactor> f(k);
    for (auto& v : f) v = {1.0, u(rng)};
    const double eps = std::pow(10.0, -3.0 * u(rng));
    const auto y = young_cover(f, eps);
    // Points on a grid of factor values |f_i| in [0, 1]^k.
    std::uniform_real_distribution<double> val(0.0, 1.0);
    for (int s = 0; s < 2000; ++s) {
      std::vector<double> v(k);
      double prod = 1.0;
      for (auto& x : v) {
        x = std::pow(val(rng), 4.0);
        prod *= x;
      }
      if (prod > eps) continue;
      bool hit = false;
      for (int i = 0; i < k; ++i) hit = hit || v[i] <= y.thresholds[i] * (1 + 1e-12);
      CHECK(hit);
    }
  }
}

TEST_CASE("monic cover examples") {
  auto c = monic_sublevel_cover(Polynomial({0, 0, 1}), 0.1);
  REQUIRE(c.merged().size() == 1);
  CHECK(c.merged()[0].lo == doctest::Approx(-0.1));
  CHECK(c.merged()[0].hi == doctest::Approx(0.1));
  c = monic_sublevel_cover(Polynomial({-1, 0, 1}), 0.1);
  CHECK(c.merged().size() == 2);
  CHECK(dense_grid_covered(Polynomial({-1, 0, 1}), 0.1, c.centers, c.radius));
  c = monic_sublevel_cover(Polynomial({1, 0, 1}), 0.5);
  CHECK(c.merged().size() == 1);
  CHECK(c.merged()[0].lo == doctest::Approx(-0.5));
  CHECK_THROWS_AS(monic_sublevel_cover(Polynomial({1, 0, 2}), 0.5), Error);
}

TEST_CASE("monic inclusion property") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 6;
    std::vector<double> c(d + 1);
    for (auto& v : c) v = 3.0 * u(rng);
    c.back() = 1.0;
    const double eps = 0.5 * (u(rng) + 1.0) + 1e-3;
    const Polynomial p(c);
    const auto cover = monic_sublevel_cover(p, std::min(eps, 1.0));
    CHECK(dense_grid_covered(p, std::min(eps, 1.0), cover.centers, cover.radius));
  }
}

TEST_CASE("snd cover") {
  const auto c = snd_sublevel_cover(Polynomial({0, 1}), 0.3, SndConstant{1, 1.0});
  CHECK(c.intervals[0].lo == doctest::Approx(-0.3));
  CHECK(snd_sublevel_cover(Polynomial({0, 1}), 1.0, SndConstant{1, 1.0}).boundary_epsilon);
  CHECK_THROWS_AS(snd_sublevel_cover(Polynomial({0, 1, 0.2, 0.1}), 0.1, SndConstant{3, 2.0}), Error);
  CHECK_THROWS_AS(snd_sublevel_cover(Polynomial({0, 1}), 1.5, SndConstant{1, 1.0}), Error);
}

TEST_CASE("sample_snd produces SND polynomials") {
  for (int d = 1; d <= 6; ++d) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto p = sample_snd(d, derive_seed(9, s));
      CHECK(p.degree() == d);
      CHECK(classify(p).snd);
    }
  }
  CHECK(sample_snd(4, 77).coeffs() == sample_snd(4, 77).coeffs());
}

TEST_CASE("estimate_B") {
  CHECK(estimate_B(1, 200, 1).B == 1.0);
  const auto b2 = estimate_B(2, 2000, 42);
  CHECK(b2.B >= 1.0);
  CHECK(std::isfinite(b2.B));
  CHECK(b2.provenance == Provenance::Empirical);
  EstimateBOptions threaded;
  threaded.threads = 3;
  CHECK(estimate_B(2, 2000, 42, threaded).B == b2.B);
  // The estimate is the minimal two-digit value: one step lower fails somewhere.
  const auto grid = geometric_grid(1e-3, 1.0, 61);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    worst = std::max(worst, required_cover_factor(sample_snd(2, derive_seed(42, i)), grid).factor);
  }
  CHECK(worst <= b2.B);
  CHECK(worst > b2.B - 0.1);
}

TEST_CASE("required_cover_factor against a dense grid") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto p = sample_snd(3, rng());
    const std::vector<double> eps{0.05, 0.2, 0.7};
    const double f = required_cover_factor(p, eps).factor;
    const auto centers = roots(p).real_parts();
    for (double e : eps) {
      CHECK(dense_grid_covered(p, e, centers, f * e + 1e-9));
    }
  }
}

TEST_CASE("degenerating family") {
  CHECK(degenerating_family(2, 1.0).coeffs() == std::vector<double>{0, 1, -2, 1});
  const auto p = degenerating_family(2, 0.25);
  const double s = std::pow(0.25, -0.5);
  const std::vector<double> expect{0, 0.25 * s * s, -0.5 * s, 0.25};
  REQUIRE(p.coeffs().size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(p.coeffs()[i] == doctest::Approx(expect[i]));
  for (int k = 2; k <= 5; ++k) CHECK(degenerating_family(k, 0.3).degree() == 2 * k - 1);
}

TEST_CASE("degenerating family breaks the SND cover") {
  const auto grid = geometric_grid(1e-3, 1.0, 61);
  const double b2 = estimate_B(2, 2000, 1).B;
  const auto p = degenerating_family(2, 1e-4);
  CHECK(required_cover_factor(p, grid).factor > b2);
}
