#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oscint/error.hpp"
#include "oscint/phase.hpp"

using namespace oscint;

TEST_CASE("monomial derivatives and batch") {
  const auto f = monomial_phase(3, {0, 1});
  CHECK(f(0.5) == doctest::Approx(0.125));
  CHECK(f.eval(1, 0.5) == doctest::Approx(0.75));
  CHECK(f.eval(3, 0.2) == doctest::Approx(6.0));
  CHECK(f.eval(4, 0.2) == 0.0);
  CHECK(f.meta().N == 3);
  CHECK(*f.meta().derivative_lower_bound == doctest::Approx(6.0));
  CHECK(*f.meta().claimed_delta == doctest::Approx(1.0 / 3));
  std::vector<double> xs{0.1, 0.2, 0.3, 0.4, 0.5}, out(5);
  f.eval_batch(1, xs, out);
  for (int i = 0; i < 5; ++i) CHECK(out[i] == doctest::Approx(3 * xs[i] * xs[i]));
  CHECK_THROWS_AS(closure_phase([](int, double x) { return x; }, 1, {0, 1}, {}).eval(2, 0.5), Error);
}

TEST_CASE("meta validation") {
  PhaseMeta m;
  m.claimed_A = 0.5;
  CHECK_THROWS_AS(closure_phase([](int, double x) { return x; }, 1, {0, 1}, m), Error);
  CHECK_THROWS_AS(monomial_phase(2, {1, 0}), Error);
}

TEST_CASE("sign_partition examples") {
  auto p = sign_partition(monomial_phase(2, {-1, 1}), 1);
  REQUIRE(p.size() == 2);
  CHECK(p[0].sign == -1);
  CHECK(p[1].sign == 1);
  CHECK(std::abs(p[0].interval.hi) < 1e-12);
  CHECK(p[0].interval.lo == -1.0);
  CHECK(p[1].interval.hi == 1.0);

  p = sign_partition(monomial_phase(3, {0, 1}), 3);
  REQUIRE(p.size() == 1);
  CHECK(p[0].sign == 1);

  p = sign_partition(sine_phase(std::nullopt, 1.0, 1.0, 0.0, {0, 7}), 2);
  REQUIRE(p.size() == 3);
  CHECK(p[0].interval.hi == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(p[1].interval.hi == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  CHECK(p[0].sign == -1);
}

TEST_CASE("sign_partition tiles and overflows") {
  const auto f = sine_phase(std::nullopt, 1.0, 50.0, 0.0, {0, 3});
  const auto p = sign_partition(f, 0);
  CHECK(p.front().interval.lo == 0.0);
  CHECK(p.back().interval.hi == 3.0);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].interval.lo == p[i - 1].interval.hi);
  PartitionOptions tight;
  tight.max_pieces = 10;
  CHECK_THROWS_AS(sign_partition(f, 0, tight), Error);
  try {
    sign_partition(f, 0, tight);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PartitionOverflow);
  }
}

TEST_CASE("isolated zeros do not split") {
  // x^2 touches zero at the origin without changing sign.
  const auto p = sign_partition(monomial_phase(2, {-1, 1}), 0);
  CHECK(p.size() == 1);
  CHECK(p[0].sign == 1);
}

TEST_CASE("declared single-sign orders give one piece") {
  const auto f = monomial_phase(4, {0, 2});
  for (int k : f.meta().single_sign_orders) CHECK(sign_partition(f, k).size() == 1);
}

TEST_CASE("refining tol never merges pieces") {
  const auto f = polynomial_phase(Polynomial({0, -3, 0, 1}), {-2, 2});
  PartitionOptions a;
  a.tol = 1e-6;
  PartitionOptions b;
  b.tol = 1e-13;
  CHECK(sign_partition(f, 1, b).size() >= sign_partition(f, 1, a).size());
}

TEST_CASE("monotone_partition") {
  auto m = monotone_partition(monomial_phase(2, {-1, 1}));
  REQUIRE(m.size() == 2);
  CHECK(std::abs(m[0].hi) < 1e-12);

  auto f = polynomial_phase(Polynomial({0, -3, 0, 1}), {-2, 2});
  REQUIRE(f.meta().N == 3);
  m = monotone_partition(f);
  REQUIRE(m.size() == 4);
  CHECK(m[0].hi == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(std::abs(m[1].hi) < 1e-11);
  CHECK(m[2].hi == doctest::Approx(1.0).epsilon(1e-11));

  m = monotone_partition(monomial_phase(1, {0, 1}));
  CHECK(m.size() == 1);
}

TEST_CASE("composed and abs power phases") {
  const auto f = monomial_phase(2, {0, 1});
  const auto g = composed_phase(Polynomial({0, 0, 0.5}), f);  // x^4 / 2
  for (double x : {0.1, 0.4, 0.9}) {
    CHECK(g(x) == doctest::Approx(0.5 * std::pow(x, 4)));
    CHECK(g.eval(1, x) == doctest::Approx(2 * std::pow(x, 3)));
    CHECK(g.eval(2, x) == doctest::Approx(6 * x * x));
    CHECK(g.eval(3, x) == doctest::Approx(12 * x));
  }
  std::vector<double> xs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, out(9);
  g.eval_batch(1, xs, out);
  for (int i = 0; i < 9; ++i) CHECK(out[i] == doctest::Approx(2 * std::pow(xs[i], 3)));

  const auto h = abs_power_phase(f, 1.5);  // x^3 on [0, 1]
  CHECK(h(0.5) == doctest::Approx(0.125));
  CHECK(h.eval(1, 0.5) == doctest::Approx(0.75));
  CHECK(h.eval(1, 0.0) == 0.0);
  CHECK(h.max_order() == 1);
}

TEST_CASE("planar domain") {
  const auto sq = PlanarDomain::rectangle({0, 1}, {0, 1});
  CHECK(sq.area() == doctest::Approx(1.0));
  CHECK(sq.slice_y(0.5).size() == 1);
  // An L shape meets vertical lines in one interval and horizontal lines in one.
  const PlanarDomain L({{{0, 2}, {0, 1}}, {{0, 1}, {1, 2}}}, 1);
  CHECK(L.area() == doctest::Approx(3.0));
  CHECK(L.slice_y(0.5).size() == 1);
  CHECK(L.slice_y(1.5)[0].hi == 1.0);
  // A U shape has two intervals along a horizontal line.
  const std::vector<Rect> U{{{0, 3}, {0, 1}}, {{0, 1}, {1, 2}}, {{2, 3}, {1, 2}}};
  CHECK_THROWS_AS(PlanarDomain(U, 1), Error);
  const PlanarDomain u(U, 2);
  CHECK(u.slice_x(1.5).size() == 2);
  CHECK(u.contains(PlanarDomain::rectangle({0, 1}, {0, 2})));
  CHECK(!u.contains(PlanarDomain::rectangle({0, 3}, {0, 2})));
}

TEST_CASE("2D families and slices") {
  const Rect unit{{0, 1}, {0, 1}};
  const auto xy = bipoly_phase({{0, 0}, {0, 1}}, unit, {1, 1});
  CHECK(xy(0.3, 0.5) == doctest::Approx(0.15));
  CHECK(xy.eval(1, 1, 0.3, 0.5) == doctest::Approx(1.0));
  CHECK(xy.eval(0, 1, 0.3, 0.5) == doctest::Approx(0.3));
  const auto s = xy.slice_y(0.3, {0, 1});
  CHECK(s(0.5) == doctest::Approx(0.15));
  CHECK(s.eval(1, 0.9) == doctest::Approx(0.3));
  const auto zero = xy.slice_y(0.0, {0, 1});
  CHECK(zero(0.5) == 0.0);

  const auto prod = product_phase(monomial_phase(3, {0, 1}), monomial_phase(2, {0, 1}), {1, 1});
  CHECK(prod(0.5, 0.5) == doctest::Approx(0.03125));
  CHECK(prod.eval(1, 1, 0.5, 0.5) == doctest::Approx(0.75));
  CHECK(prod.slice_x(0.5, {0, 1})(0.5) == doctest::Approx(0.03125));

  const auto c = composed_phase_2d(Polynomial({0, 0, 0.5}), xy);
  for (double x : {0.2, 0.7}) {
    for (double y : {0.1, 0.6}) {
      CHECK(c(x, y) == doctest::Approx(0.5 * x * x * y * y));
      CHECK(c.eval(0, 1, x, y) == doctest::Approx(x * x * y));
      CHECK(c.eval(1, 1, x, y) == doctest::Approx(2 * x * y));
      CHECK(c.eval(0, 2, x, y) == doctest::Approx(x * x));
      CHECK(c.slice_y(x, {0, 1}).eval(1, y) == doctest::Approx(x * x * y));
    }
  }
}
