#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "oscint/error.hpp"
#include "oscint/kernels.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon();
constexpr int kDegree = 16;
constexpr int kMaxDepth = 300;

struct Piece {
  double a, b, fa, fb;
};

struct Cell {
  Interval x;
  Interval y;
  double tmin = 0.0;
  double tmax = 0.0;
  std::vector<Piece> lo_pieces;  // monotone pieces of g(., y.lo)
  std::vector<Piece> hi_pieces;  // monotone pieces of g(., y.hi)
  double area() const { return x.length() * y.length(); }
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  bool atomic = false;  // too narrow to interpolate; carries only its increment
  double increment = 0.0;
  double error = 0.0;
  std::array<double, kDegree + 1> cheb{};
};

double cheb_eval(const std::array<double, kDegree + 1>& c, double u) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = kDegree; k >= 1; --k) {
    const double t = 2.0 * u * b1 - b2 + c[k];
    b2 = b1;
    b1 = t;
  }
  return u * b1 - b2 + c[0];
}

}  // namespace

struct LevelSetIntegrator::Impl {
  Phase2D g;
  QuadConfig cfg;
  std::vector<Cell> cells;
  std::vector<std::pair<double, double>> atoms;  // (value, area) of cells where g is constant
  std::vector<Panel> panels;
  double total_area = 0.0;
  double cont_area = 0.0;
  double tmin = 0.0;
  double tmax = 0.0;
  double tau = 0.0;

  Impl(const Phase2D& phase, const QuadConfig& c) : g(phase), cfg(c) {}

  double bval(const Cell& c, bool hi, double x) const { return g.eval(0, 0, x, hi ? c.y.hi : c.y.lo); }

  // |{y in cell.y : g(x, y) <= t}| for a slice monotone in y.
  double slice_measure(const Cell& c, double x, double t) const {
    const double ga = g.eval(0, 0, x, c.y.lo);
    const double gb = g.eval(0, 0, x, c.y.hi);
    if (t >= std::max(ga, gb)) return c.y.length();
    if (t < std::min(ga, gb)) return 0.0;
    const double s = gb > ga ? 1.0 : -1.0;
    double lo = c.y.lo, hi = c.y.hi;
    double hlo = s * (ga - t), hhi = s * (gb - t);
    if (hlo >= 0.0) return s > 0 ? 0.0 : c.y.length();
    double y = hhi > hlo ? lo - hlo * (hi - lo) / (hhi - hlo) : 0.5 * (lo + hi);
    y = std::clamp(y, lo, hi);
    double width_before = hi - lo;
    for (int it = 0; it < 200; ++it) {
      const double hv = s * (g.eval(0, 0, x, y) - t);
      if (hv == 0.0) break;
      if (hv < 0.0) {
        lo = y;
      } else {
        hi = y;
      }
      const double d = s * g.eval(0, 1, x, y);
      double yn = d > 0.0 ? y - hv / d : std::numeric_limits<double>::quiet_NaN();
      if (!(yn > lo && yn < hi)) yn = 0.5 * (lo + hi);
      // Force a bisection when Newton stalls.
      if (it % 3 == 2) {
        if (hi - lo > 0.25 * width_before) yn = 0.5 * (lo + hi);
        width_before = hi - lo;
      }
      const bool done = std::abs(yn - y) <= 2.0 * kUnit * std::max(1.0, std::abs(y)) ||
                        hi - lo <= 4.0 * kUnit * std::max(1.0, std::abs(y));
      y = yn;
      if (done) break;
    }
    return s > 0 ? y - c.y.lo : c.y.hi - y;
  }

  double kink(const Cell& c, bool hi, const Piece& p, double t) const {
    double a = p.a, b = p.b;
    const bool increasing = p.fb > p.fa;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double v = bval(c, hi, m);
      if ((v <= t) == increasing) {
        a = m;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }

  double cell_measure(const Cell& c, double t) const {
    if (t < c.tmin) return 0.0;
    if (t >= c.tmax) return c.area();
    std::vector<double> pts{c.x.lo, c.x.hi};
    for (int side = 0; side < 2; ++side) {
      for (const auto& p : side ? c.hi_pieces : c.lo_pieces) {
        if (std::min(p.fa, p.fb) < t && t < std::max(p.fa, p.fb)) pts.push_back(kink(c, side == 1, p, t));
      }
    }
    std::sort(pts.begin(), pts.end());
    CompensatedSum sum;
    const double ylen = c.y.length();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double u = pts[i], v = pts[i + 1];
      if (v <= u) continue;
      const double mm = slice_measure(c, 0.5 * (u + v), t);
      if (mm == 0.0) continue;
      if (mm == ylen) {
        sum.add(ylen * (v - u));
        continue;
      }
      const auto r = integrate_real([&](double x) { return slice_measure(c, x, t); }, u, v,
                                    1e-15 * (v - u) * ylen, 0.0, 200);
      sum.add(r.value);
    }
    return sum.value();
  }

  double measure(double t) const {
    CompensatedSum s;
    for (const auto& c : cells) s.add(cell_measure(c, t));
    return s.value();
  }

  void build_cells(const PlanarDomain& X) {
    const auto xb = X.x_breaks();
    PartitionOptions popt;
    popt.samples_per_unit = 1024.0;
    const int first[] = {1};
    for (std::size_t s = 0; s + 1 < xb.size(); ++s) {
      const Interval xs{xb[s], xb[s + 1]};
      if (xs.length() <= 0.0) continue;
      for (const auto& J : X.slice_y(xs.mid())) {
        if (J.length() <= 0.0) continue;
        Cell c;
        c.x = xs;
        c.y = J;
        check_monotone(c);
        for (int side = 0; side < 2; ++side) {
          const double yv = side ? J.hi : J.lo;
          const PhaseFunction b = closure_phase(
              [this, yv](int order, double x) { return g.eval(order, 0, x, yv); }, 1, xs, PhaseMeta{},
              "boundary");
          auto& out = side ? c.hi_pieces : c.lo_pieces;
          for (const auto& iv : split_by_orders(b, first, xs, popt)) {
            out.push_back({iv.lo, iv.hi, b(iv.lo), b(iv.hi)});
          }
        }
        c.tmin = std::numeric_limits<double>::infinity();
        c.tmax = -c.tmin;
        for (const auto* list : {&c.lo_pieces, &c.hi_pieces}) {
          for (const auto& p : *list) {
            c.tmin = std::min({c.tmin, p.fa, p.fb});
            c.tmax = std::max({c.tmax, p.fa, p.fb});
          }
        }
        total_area += c.area();
        if (c.tmax - c.tmin <= 4.0 * kUnit * std::max(1.0, std::abs(c.tmax))) {
          atoms.emplace_back(c.tmin, c.area());
          continue;
        }
        cont_area += c.area();
        cells.push_back(std::move(c));
      }
    }
  }

  void check_monotone(const Cell& c) const {
    constexpr int kGrid = 33;
    std::vector<double> d;
    d.reserve(kGrid * kGrid);
    double dmax = 0.0;
    for (int i = 0; i < kGrid; ++i) {
      const double x = c.x.lo + c.x.length() * i / (kGrid - 1);
      for (int j = 0; j < kGrid; ++j) {
        const double y = c.y.lo + c.y.length() * j / (kGrid - 1);
        d.push_back(g.eval(0, 1, x, y));
        dmax = std::max(dmax, std::abs(d.back()));
      }
    }
    const double floor = 1e-13 * dmax;
    const bool pos = std::any_of(d.begin(), d.end(), [&](double v) { return v > floor; });
    const bool neg = std::any_of(d.begin(), d.end(), [&](double v) { return v < -floor; });
    if (pos && neg) {
      fail(ErrorCode::Precondition, "level-set route needs " + g.name() + " monotone in y on each cell");
    }
  }

  void fit_panel(double a, double b, double ma, double mb, int depth) {
    const double w = b - a;
    if (depth >= kMaxDepth || w <= 64.0 * kUnit * std::max(std::abs(a), std::abs(b))) {
      Panel p;
      p.a = a;
      p.b = b;
      p.atomic = true;
      p.increment = mb - ma;
      panels.push_back(p);
      return;
    }
    std::array<double, kDegree + 1> f{};
    for (int j = 0; j <= kDegree; ++j) {
      // Lobatto points run from b (j = 0) to a (j = kDegree).
      if (j == 0) {
        f[j] = mb;
      } else if (j == kDegree) {
        f[j] = ma;
      } else {
        f[j] = measure(0.5 * (a + b) + 0.5 * w * std::cos(std::numbers::pi * j / kDegree));
      }
    }
    Panel p;
    p.a = a;
    p.b = b;
    for (int k = 0; k <= kDegree; ++k) {
      double s = 0.5 * (f[0] + (k % 2 ? -f[kDegree] : f[kDegree]));
      for (int j = 1; j < kDegree; ++j) s += f[j] * std::cos(std::numbers::pi * j * k / kDegree);
      p.cheb[k] = 2.0 * s / kDegree;
    }
    p.cheb[0] *= 0.5;
    p.cheb[kDegree] *= 0.5;
    const double tail = std::max({std::abs(p.cheb[kDegree - 2]), std::abs(p.cheb[kDegree - 1]),
                                  std::abs(p.cheb[kDegree])});
    if (tail <= tau) {
      p.error = 2.0 * tail;
      panels.push_back(p);
      return;
    }
    const double mid = 0.5 * (a + b);
    const double mm = measure(mid);
    fit_panel(a, mid, ma, mm, depth + 1);
    fit_panel(mid, b, mm, mb, depth + 1);
  }

  void build() {
    if (cells.empty()) return;
    std::vector<double> T;
    for (const auto& c : cells) {
      for (const auto* list : {&c.lo_pieces, &c.hi_pieces}) {
        for (const auto& p : *list) {
          T.push_back(p.fa);
          T.push_back(p.fb);
        }
      }
    }
    std::sort(T.begin(), T.end());
    tmin = T.front();
    tmax = T.back();
    const double scale = std::max(std::abs(tmin), std::abs(tmax));
    std::vector<double> uniq{T.front()};
    for (double t : T) {
      if (t - uniq.back() > 16.0 * kUnit * scale) uniq.push_back(t);
    }
    uniq.back() = tmax;
    tau = 1e-14 * cont_area;
    std::vector<double> m(uniq.size());
    for (std::size_t i = 0; i < uniq.size(); ++i) m[i] = measure(uniq[i]);
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) fit_panel(uniq[i], uniq[i + 1], m[i], m[i + 1], 0);
  }

  QuadResult integrate(double lambda) const {
    QuadResult result;
    result.lambda = lambda;
    if (lambda == 0.0) {
      result.value = total_area;
      result.panels_used = 1;
      return result;
    }
    const double lam = std::abs(lambda);
    CompensatedSum re, im, err;
    for (const auto& [t0, area] : atoms) {
      re.add(area * std::cos(lam * t0));
      im.add(area * std::sin(lam * t0));
    }

    // Subpanel count first so the budget check happens before any work.
    std::int64_t total_sub = 0;
    for (const auto& p : panels) {
      if (p.atomic) continue;
      total_sub += static_cast<std::int64_t>(std::max(1.0, std::ceil(lam * (p.b - p.a) / cfg.phase_variation_cap)));
    }
    if (total_sub > cfg.max_panels) {
      fail(ErrorCode::PanelBudget, "level-set route needs " + std::to_string(total_sub) + " subpanels, more than " +
                                       std::to_string(cfg.max_panels));
    }

    constexpr std::size_t kChunk = 512;
    std::vector<double> us, ts, dv, sn, cs;
    us.reserve(15 * kChunk);
    std::array<double, kDegree> deriv{};
    for (const auto& p : panels) {
      const double w = p.b - p.a;
      if (p.atomic) {
        const double tm = 0.5 * (p.a + p.b);
        re.add(p.increment * std::cos(lam * tm));
        im.add(p.increment * std::sin(lam * tm));
        err.add(std::min(2.0 * std::abs(p.increment), lam * w * std::abs(p.increment)));
        continue;
      }
      // Chebyshev coefficients of dp/du.
      deriv.fill(0.0);
      {
        double d2 = 0.0, d1 = 0.0;
        for (int k = kDegree; k >= 1; --k) {
          const double dk = d2 + 2.0 * k * p.cheb[k];
          deriv[k - 1] = dk;
          d2 = d1;
          d1 = dk;
        }
        deriv[0] *= 0.5;
      }
      const auto m = static_cast<std::int64_t>(std::max(1.0, std::ceil(lam * w / cfg.phase_variation_cap)));
      const double scale = 2.0 / w;
      for (std::int64_t start = 0; start < m; start += kChunk) {
        const std::int64_t count = std::min<std::int64_t>(kChunk, m - start);
        const std::size_t n = static_cast<std::size_t>(15 * count);
        us.resize(n);
        ts.resize(n);
        dv.resize(n);
        sn.resize(n);
        cs.resize(n);
        for (std::int64_t q = 0; q < count; ++q) {
          const double lo = -1.0 + 2.0 * static_cast<double>(start + q) / m;
          const double hi = start + q + 1 == m ? 1.0 : -1.0 + 2.0 * static_cast<double>(start + q + 1) / m;
          gk15::abscissae(lo, hi, &us[15 * q]);
        }
        for (std::size_t i = 0; i < n; ++i) ts[i] = lam * (0.5 * (p.a + p.b) + 0.5 * w * us[i]);
        kernels::clenshaw(deriv, us, dv);
        kernels::sincos(ts, sn, cs);
        for (std::int64_t q = 0; q < count; ++q) {
          double kr = 0.0, ki = 0.0, gr = 0.0, gi = 0.0;
          for (int k = 0; k < 15; ++k) {
            const std::size_t i = 15 * q + k;
            const double v = dv[i] * scale;
            kr += gk15::kWeightsK[k] * v * cs[i];
            ki += gk15::kWeightsK[k] * v * sn[i];
            gr += gk15::kWeightsG[k] * v * cs[i];
            gi += gk15::kWeightsG[k] * v * sn[i];
          }
          // Half-width of the subpanel in t.
          const double h = 0.5 * w / m;
          re.add(h * kr);
          im.add(h * ki);
          err.add(h * std::hypot(kr - gr, ki - gi));
        }
      }
      // Interpolation error: |int e^{i lam t} q'| <= min(lam w, 2 n^2) |q| plus endpoint terms.
      err.add(p.error * (2.0 + std::min(lam * w, 2.0 * kDegree * kDegree)));
    }
    result.value = {re.value(), lambda < 0 ? -im.value() : im.value()};
    result.error_estimate = err.value() + 8.0 * kUnit * lam * std::max(std::abs(tmin), std::abs(tmax)) * total_area;
    result.panels_used = total_sub + static_cast<std::int64_t>(panels.size());
    return result;
  }

  double distribution(double t) const {
    double atom_mass = 0.0;
    for (const auto& [t0, area] : atoms) {
      if (t0 <= t) atom_mass += area;
    }
    if (panels.empty() || t < tmin) return atom_mass;
    if (t >= tmax) return atom_mass + cont_area;
    auto it = std::upper_bound(panels.begin(), panels.end(), t, [](double v, const Panel& p) { return v < p.b; });
    if (it == panels.end()) --it;
    const Panel& p = *it;
    if (p.atomic) return atom_mass + measure(t);
    const double u = std::clamp((2.0 * t - p.a - p.b) / (p.b - p.a), -1.0, 1.0);
    return atom_mass + cheb_eval(p.cheb, u);
  }
};

LevelSetIntegrator::LevelSetIntegrator(const Phase2D& g, const PlanarDomain& X, const QuadConfig& cfg)
    : impl_(std::make_unique<Impl>(g, cfg)) {
  cfg.validate();
  require(g.max_orders()[0] >= 1 && g.max_orders()[1] >= 1, ErrorCode::InvalidArgument,
          "level-set route needs first derivatives in both variables");
  const Rect box = X.bounding_box();
  const Rect dom = g.domain();
  const double sx = 1e-14 * (1.0 + std::abs(dom.x.lo) + std::abs(dom.x.hi));
  const double sy = 1e-14 * (1.0 + std::abs(dom.y.lo) + std::abs(dom.y.hi));
  if (box.x.lo < dom.x.lo - sx || box.x.hi > dom.x.hi + sx || box.y.lo < dom.y.lo - sy ||
      box.y.hi > dom.y.hi + sy) {
    fail(ErrorCode::Domain, "planar domain lies outside the domain of " + g.name());
  }
  impl_->build_cells(X);
  impl_->build();
}

LevelSetIntegrator::~LevelSetIntegrator() = default;
LevelSetIntegrator::LevelSetIntegrator(LevelSetIntegrator&&) noexcept = default;
LevelSetIntegrator& LevelSetIntegrator::operator=(LevelSetIntegrator&&) noexcept = default;

QuadResult LevelSetIntegrator::integrate(double lambda) const {
  require(std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite");
  return impl_->integrate(lambda);
}

double LevelSetIntegrator::distribution(double t) const { return impl_->distribution(t); }

double LevelSetIntegrator::distribution_direct(double t) const {
  double atom_mass = 0.0;
  for (const auto& [t0, area] : impl_->atoms) {
    if (t0 <= t) atom_mass += area;
  }
  return atom_mass + impl_->measure(t);
}

Interval LevelSetIntegrator::value_range() const {
  double lo = impl_->tmin, hi = impl_->tmax;
  bool any = !impl_->cells.empty();
  for (const auto& [t0, area] : impl_->atoms) {
    lo = any ? std::min(lo, t0) : t0;
    hi = any ? std::max(hi, t0) : t0;
    any = true;
  }
  return {lo, hi};
}

std::size_t LevelSetIntegrator::panel_count() const { return impl_->panels.size(); }

QuadResult osc_integrate_2d_levelset(const Phase2D& g, double lambda, const PlanarDomain& X,
                                     const QuadConfig& cfg) {
  return LevelSetIntegrator(g, X, cfg).integrate(lambda);
}

}  // namespace oscint
