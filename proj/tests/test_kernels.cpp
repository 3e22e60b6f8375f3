#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oscint/kernels.hpp"

namespace k = oscint::kernels;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool have_avx2() { return k::isa_supported(k::Isa::Avx2); }

}  // namespace

TEST_CASE("select_isa falls back when unsupported") {
  const auto before = k::active_isa();
  CHECK(k::select_isa(k::Isa::Scalar) == k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  const auto got = k::select_isa(k::Isa::Avx2);
  CHECK(got == (have_avx2() ? k::Isa::Avx2 : k::Isa::Scalar));
  k::select_isa(before);
}

TEST_CASE("horner avx2 matches scalar") {
  if (!have_avx2()) return;
  const auto coeffs = uniform(9, -2.0, 2.0, 1);
  for (std::size_t n : {0u, 1u, 7u, 8u, 13u, 1000u}) {
    const auto xs = uniform(n, -1.5, 1.5, 2 + static_cast<unsigned>(n));
    std::vector<double> a(n), b(n);
    k::scalar::horner(coeffs, xs, a);
    k::avx2::horner(coeffs, xs, b);
    for (std::size_t i = 0; i < n; ++i) {
      double scale = 0.0;
      for (std::size_t j = coeffs.size(); j-- > 0;) scale = scale * std::abs(xs[i]) + std::abs(coeffs[j]);
      CHECK(std::abs(a[i] - b[i]) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("sincos avx2 matches libm") {
  if (!have_avx2()) return;
  for (double range : {1.0, 100.0, 1e5, 3e8, 1e12}) {
    const auto th = uniform(4099, -range, range, 7);
    std::vector<double> s(th.size()), c(th.size());
    k::avx2::sincos(th, s, c);
    const double tol = 5e-16;
    for (std::size_t i = 0; i < th.size(); ++i) {
      REQUIRE(std::abs(s[i] - std::sin(th[i])) <= tol);
      REQUIRE(std::abs(c[i] - std::cos(th[i])) <= tol);
    }
  }
}

TEST_CASE("sincos special values") {
  const std::vector<double> th{0.0, -0.0, M_PI_4, M_PI_2, M_PI, -M_PI, 2 * M_PI, 1e-300, NAN};
  std::vector<double> s(th.size()), c(th.size());
  k::sincos(th, s, c);
  for (std::size_t i = 0; i + 1 < th.size(); ++i) {
    CHECK(s[i] == doctest::Approx(std::sin(th[i])).epsilon(1e-15));
    CHECK(c[i] == doctest::Approx(std::cos(th[i])).epsilon(1e-15));
  }
  CHECK(std::isnan(s.back()));
  CHECK(std::isnan(c.back()));
}

TEST_CASE("clenshaw avx2 matches scalar and the cosine form") {
  const auto cheb = uniform(17, -1.0, 1.0, 3);
  const auto us = uniform(1003, -1.0, 1.0, 4);
  std::vector<double> a(us.size()), b(us.size());
  k::scalar::clenshaw(cheb, us, a);
  for (std::size_t i = 0; i < us.size(); ++i) {
    double direct = 0.0;
    for (std::size_t j = 0; j < cheb.size(); ++j) direct += cheb[j] * std::cos(j * std::acos(us[i]));
    CHECK(a[i] == doctest::Approx(direct).epsilon(1e-13));
  }
  if (!have_avx2()) return;
  k::avx2::clenshaw(cheb, us, b);
  double scale = 1.0;
  for (double v : cheb) scale += std::abs(v);
  for (std::size_t i = 0; i < us.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14 * scale);
}
