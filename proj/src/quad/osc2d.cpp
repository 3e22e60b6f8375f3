#include <algorithm>
#include <cmath>

#include "oscint/error.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

namespace {

void check_inside(const Phase2D& g, const PlanarDomain& X) {
  const Rect box = X.bounding_box();
  const Rect dom = g.domain();
  const double sx = 1e-14 * (1.0 + std::abs(dom.x.lo) + std::abs(dom.x.hi));
  const double sy = 1e-14 * (1.0 + std::abs(dom.y.lo) + std::abs(dom.y.hi));
  if (box.x.lo < dom.x.lo - sx || box.x.hi > dom.x.hi + sx || box.y.lo < dom.y.lo - sy ||
      box.y.hi > dom.y.hi + sy) {
    fail(ErrorCode::Domain, "planar domain lies outside the domain of " + g.name());
  }
}

struct OuterPanel {
  std::complex<double> value;
  double error = 0.0;
  double inner_error = 0.0;
  std::int64_t panels = 1;
};

}  // namespace

QuadResult osc_integrate_2d(const Phase2D& g, double lambda, const PlanarDomain& X, const QuadConfig& cfg) {
  cfg.validate();
  require(std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite");
  check_inside(g, X);
  QuadResult result;
  result.lambda = lambda;
  if (lambda == 0.0) {
    result.value = X.area();
    result.panels_used = 1;
    return result;
  }
  require(g.max_orders()[0] >= 1 && g.max_orders()[1] >= 1, ErrorCode::InvalidArgument,
          "2D quadrature needs first derivatives in both variables");
  const double lam = std::abs(lambda);
  QuadConfig inner_cfg = cfg;
  inner_cfg.partition_density = std::min(cfg.partition_density, 256.0);
  const Interval ydom = g.domain().y;

  // F(x) = sum over the slice intervals of the inner oscillatory integral.
  auto inner = [&](double x, const std::vector<Interval>& ys, double& err) {
    const PhaseFunction s = g.slice_y(x, ydom);
    std::complex<double> v;
    err = 0.0;
    for (const auto& J : ys) {
      const QuadResult r = osc_integrate_1d(s, lam, J, inner_cfg);
      v += r.value;
      err += r.error_estimate;
    }
    return v;
  };

  auto rule = [&](double a, double b, const std::vector<Interval>& ys) {
    double xs[15];
    gk15::abscissae(a, b, xs);
    std::complex<double> k;
    std::complex<double> gsum;
    OuterPanel p;
    for (int i = 0; i < 15; ++i) {
      double e = 0.0;
      const std::complex<double> v = inner(xs[i], ys, e);
      p.inner_error = std::max(p.inner_error, e);
      k += gk15::kWeightsK[i] * v;
      gsum += gk15::kWeightsG[i] * v;
    }
    const double h = 0.5 * (b - a);
    p.value = h * k;
    p.error = h * std::abs(k - gsum);
    return p;
  };

  const auto xb = X.x_breaks();
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum outer_err;
  double inner_sup = 0.0;
  std::int64_t used = 0;
  for (std::size_t s = 0; s + 1 < xb.size(); ++s) {
    const double a = xb[s];
    const double b = xb[s + 1];
    const auto ys = X.slice_y(0.5 * (a + b));
    if (ys.empty()) continue;
    const double ylen = total_length(ys);

    // Sampled sup |d/dx g| per coarse cell sets the outer panel widths.
    constexpr int kCoarse = 64;
    constexpr int kYSamples = 17;
    std::vector<double> dmax(kCoarse + 1, 0.0);
    for (int i = 0; i <= kCoarse; ++i) {
      const double x = a + (b - a) * i / kCoarse;
      for (const auto& J : ys) {
        for (int j = 0; j < kYSamples; ++j) {
          const double y = J.lo + J.length() * j / (kYSamples - 1);
          dmax[i] = std::max(dmax[i], std::abs(g.eval(1, 0, x, y)));
        }
      }
    }
    std::vector<Interval> panels;
    for (int i = 0; i < kCoarse; ++i) {
      const double lo = a + (b - a) * i / kCoarse;
      const double hi = i + 1 == kCoarse ? b : a + (b - a) * (i + 1) / kCoarse;
      const double d = 1.25 * std::max(dmax[i], dmax[i + 1]);
      const auto n = static_cast<std::int64_t>(std::max(1.0, std::ceil(lam * d * (hi - lo) / cfg.phase_variation_cap)));
      if (used + static_cast<std::int64_t>(panels.size()) + n > cfg.max_panels) {
        fail(ErrorCode::PanelBudget, "outer panel count exceeds " + std::to_string(cfg.max_panels));
      }
      for (std::int64_t k = 0; k < n; ++k) {
        panels.push_back({lo + (hi - lo) * k / n, k + 1 == n ? hi : lo + (hi - lo) * (k + 1) / n});
      }
    }

    const double tol_per_length = 0.1 * cfg.rel_tol * ylen;
    for (const auto& P : panels) {
      // Left-to-right depth-first refinement keeps the summation order fixed.
      struct Item {
        Interval iv;
        OuterPanel val;
        int depth;
      };
      std::vector<Item> stack{{P, rule(P.lo, P.hi, ys), 0}};
      while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.val.error > tol_per_length * it.iv.length() && it.depth < 12) {
          const double mid = it.iv.mid();
          stack.push_back({{mid, it.iv.hi}, rule(mid, it.iv.hi, ys), it.depth + 1});
          stack.push_back({{it.iv.lo, mid}, rule(it.iv.lo, mid, ys), it.depth + 1});
          continue;
        }
        re.add(it.val.value.real());
        im.add(it.val.value.imag());
        outer_err.add(it.val.error);
        inner_sup = std::max(inner_sup, it.val.inner_error);
        ++used;
      }
    }
    if (used > cfg.max_panels) {
      fail(ErrorCode::PanelBudget, "outer panel count exceeds " + std::to_string(cfg.max_panels));
    }
  }
  const double outer_length = xb.back() - xb.front();
  result.value = {re.value(), lambda < 0 ? -im.value() : im.value()};
  result.error_estimate = outer_err.value() + inner_sup * outer_length;
  result.panels_used = used;
  return result;
}

}  // namespace oscint
