#include "oscint/sublevel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "oscint/error.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

namespace {

// Smallest x in [a, b] with pred(x) true, for a predicate false-then-true on [a, b].
template <class Pred>
double first_true(double a, double b, Pred pred) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (pred(m)) {
      b = m;
    } else {
      a = m;
    }
  }
  return b;
}

}  // namespace

SublevelResult sublevel_1d(const PhaseFunction& f, double c, double eps, Interval I, const PartitionOptions& options) {
  require(std::isfinite(c), ErrorCode::InvalidArgument, "sublevel height c must be finite");
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "sublevel eps must be positive");
  require(I.lo <= I.hi, ErrorCode::InvalidArgument, "interval must have lo <= hi");
  const Interval dom = f.domain();
  const double slack = 1e-14 * (1.0 + std::max(std::abs(dom.lo), std::abs(dom.hi)));
  if (I.lo < dom.lo - slack || I.hi > dom.hi + slack) {
    fail(ErrorCode::Domain, "sublevel interval lies outside the domain of " + f.name());
  }
  I.lo = std::max(I.lo, dom.lo);
  I.hi = std::min(I.hi, dom.hi);

  SublevelResult out;
  out.c = c;
  out.epsilon = eps;
  if (I.length() == 0.0) return out;
  const double lo_v = c - eps;
  const double hi_v = c + eps;
  std::vector<Interval> comps;
  const int first[] = {1};
  const auto pieces = f.max_order() >= 1 ? split_by_orders(f, first, I, options) : std::vector<Interval>{I};
  for (const auto& p : pieces) {
    const double fa = f(p.lo);
    const double fb = f(p.hi);
    double left, right;
    if (fa <= fb) {
      if (fb < lo_v || fa > hi_v) continue;
      left = fa >= lo_v ? p.lo : first_true(p.lo, p.hi, [&](double x) { return f(x) >= lo_v; });
      right = fb <= hi_v ? p.hi : first_true(p.lo, p.hi, [&](double x) { return f(x) > hi_v; });
    } else {
      if (fa < lo_v || fb > hi_v) continue;
      left = fa <= hi_v ? p.lo : first_true(p.lo, p.hi, [&](double x) { return f(x) <= hi_v; });
      right = fb >= lo_v ? p.hi : first_true(p.lo, p.hi, [&](double x) { return f(x) < lo_v; });
    }
    if (right >= left) comps.push_back({left, right});
  }
  out.components = merge_intervals(std::move(comps));
  out.measure = total_length(out.components);
  return out;
}

double sublevel_2d(const Phase2D& f, double c, double eps, const PlanarDomain& X, double rel_tol) {
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidArgument, "sublevel eps must be positive");
  require(rel_tol > 0.0 && rel_tol < 1.0, ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1)");
  PartitionOptions popt;
  popt.samples_per_unit = 256.0;
  popt.min_samples = 32;
  const Interval ydom = f.domain().y;
  const auto xb = X.x_breaks();
  CompensatedSum total;
  for (std::size_t s = 0; s + 1 < xb.size(); ++s) {
    const double a = xb[s];
    const double b = xb[s + 1];
    const auto ys = X.slice_y(0.5 * (a + b));
    if (ys.empty() || b <= a) continue;
    auto slice = [&](double x) {
      const PhaseFunction g = f.slice_y(x, ydom);
      double m = 0.0;
      for (const auto& J : ys) m += sublevel_1d(g, c, eps, J, popt).measure;
      return m;
    };
    const double strip_area = (b - a) * total_length(ys);
    const auto r = integrate_real(slice, a, b, 1e-14 * strip_area, rel_tol, 4000);
    total.add(r.value);
  }
  return total.value();
}

namespace bump {

namespace {

double rho_raw(double u) {
  const double q = 1.0 - u * u;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double rho_norm() {
  static const double z = integrate_real(rho_raw, -1.0, 1.0, 1e-17, 1e-15).value;
  return z;
}

}  // namespace

double rho(double u) { return rho_raw(u) / rho_norm(); }

double phi(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  // phi(x) = 1 - R(2|x| - 3), R the distribution function of rho.
  const double u = 2.0 * ax - 3.0;
  return integrate_real(rho, u, 1.0, 1e-17, 1e-14).value;
}

double phi_hat(double xi) {
  if (xi == 0.0) return 3.0;
  // One integration by parts: phi' = -2 rho(2x - 3) on [1, 2], then u = 2x - 3.
  // rho vanishes to all orders at +-1, so a fixed composite Kronrod rule with a
  // few panels per oscillation converges quickly.
  const double pxi = std::numbers::pi * xi;
  const int panels = 32 + static_cast<int>(std::ceil(2.0 * std::abs(xi)));
  CompensatedSum sum;
  double xs[15];
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + 2.0 * p / panels;
    const double b = p + 1 == panels ? 1.0 : -1.0 + 2.0 * (p + 1) / panels;
    gk15::abscissae(a, b, xs);
    double k = 0.0;
    for (int i = 0; i < 15; ++i) k += gk15::kWeightsK[i] * rho(xs[i]) * std::sin(pxi * (xs[i] + 3.0));
    sum.add(0.5 * (b - a) * k);
  }
  return sum.value() / pxi;
}

}  // namespace bump

OscToSublevelConstant osc_to_sublevel_constant(double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  static std::mutex mu;
  static std::map<double, OscToSublevelConstant> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(delta); it != cache.end()) return it->second;
  }

  const double third = 1.0 / 3.0;
  auto weight = [&](double xi) { return std::abs(bump::phi_hat(xi)) * std::pow(xi, -delta); };

  // [0, 1]: xi = v^{1/(1-delta)} removes the xi^{-delta} singularity.
  const double p = 1.0 / (1.0 - delta);
  CompensatedSum total;
  {
    double v0 = 0.0;
    for (double xi_break : {third, 2.0 * third, 1.0}) {
      const double v1 = std::pow(xi_break, 1.0 - delta);
      const auto r = integrate_real([&](double v) { return p * std::abs(bump::phi_hat(std::pow(v, p))); }, v0, v1,
                                    1e-15, 1e-12);
      total.add(r.value);
      v0 = v1;
    }
  }
  // Dyadic blocks [2^j, 2^{j+1}], each cut at the zeros k/3 of sin(3 pi xi).
  OscToSublevelConstant out;
  out.delta = delta;
  out.bump_spec = bump::kSpec;
  constexpr double kMaxCutoff = 4096.0;
  double lo = 1.0;
  for (;;) {
    const double hi = 2.0 * lo;
    CompensatedSum block;
    const int panels = static_cast<int>(std::lround(3.0 * (hi - lo)));
    for (int k = 0; k < panels; ++k) {
      const double a = lo + k * third;
      const double b = k + 1 == panels ? hi : lo + (k + 1) * third;
      block.add(integrate_real(weight, a, b, 1e-17, 1e-10).value);
    }
    total.add(block.value());
    out.cutoff = hi;
    out.tail_estimate = block.value() / total.value();
    if (lo >= 8.0 && out.tail_estimate <= 1e-10) break;
    if (hi >= kMaxCutoff) {
      if (out.tail_estimate > 1e-8) {
        fail(ErrorCode::NonconvergentTail, "bump transform tail beyond xi = " + std::to_string(hi) +
                                               " still contributes " + std::to_string(out.tail_estimate));
      }
      break;
    }
    lo = hi;
  }
  out.C_delta = 2.0 * total.value();
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(delta, out);
  return out;
}

double estimate_oscillatory_constant(const PhaseFunction& f, double delta, Interval I,
                                     std::span<const double> lambdas) {
  require(delta > 0.0, ErrorCode::InvalidArgument, "delta must be positive");
  double sup = 0.0;
  for (double lam : lambdas) {
    if (lam == 0.0) continue;
    const auto r = osc_integrate_1d(f, lam, I);
    sup = std::max(sup, (std::abs(r.value) + r.error_estimate) * std::pow(std::abs(lam), delta));
  }
  return std::max(1.0, sup);
}

std::vector<double> per_decade_grid(double lo, double hi, int per_decade) {
  require(lo > 0.0 && hi >= lo && per_decade >= 1, ErrorCode::InvalidArgument,
          "per_decade_grid needs 0 < lo <= hi and per_decade >= 1");
  const int count = static_cast<int>(std::lround(per_decade * std::log10(hi / lo))) + 1;
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    g[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  if (count > 1) g.back() = hi;
  return g;
}

}  // namespace oscint
