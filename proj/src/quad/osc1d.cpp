#include <algorithm>
#include <cmath>
#include <limits>

#include "oscint/error.hpp"
#include "oscint/kernels.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

void QuadConfig::validate() const {
  require(rel_tol > 0.0 && rel_tol < 1.0, ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1)");
  require(max_panels >= 1, ErrorCode::InvalidArgument, "max_panels must be positive");
  require(phase_variation_cap > 0.0 && phase_variation_cap <= std::numbers::pi, ErrorCode::InvalidArgument,
          "phase_variation_cap must lie in (0, pi]");
  require(partition_density > 0.0, ErrorCode::InvalidArgument, "partition_density must be positive");
}

namespace gk15 {

void abscissae(double a, double b, double* out15) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int k = 0; k < 8; ++k) out15[k] = c - h * kNodes[k];
  for (int k = 0; k < 7; ++k) out15[8 + k] = c + h * kNodes[k];
}

}  // namespace gk15

RealQuadResult integrate_real(const std::function<double(double)>& f, double a, double b, double abs_tol,
                              double rel_tol, int max_segments) {
  RealQuadResult out;
  if (a == b) return out;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  struct Seg {
    double a, b, value, error;
    bool final;
  };
  auto rule = [&](double lo, double hi) {
    double xs[15];
    double fs[15];
    gk15::abscissae(lo, hi, xs);
    double k = 0.0, g = 0.0, ka = 0.0;
    for (int i = 0; i < 15; ++i) {
      fs[i] = f(xs[i]);
      k += gk15::kWeightsK[i] * fs[i];
      g += gk15::kWeightsG[i] * fs[i];
      ka += gk15::kWeightsK[i] * std::abs(fs[i]);
    }
    out.evaluations += 15;
    const double h = 0.5 * (hi - lo);
    const double ah = std::abs(h);
    // QUADPACK QK15 error heuristic: |K - G| rescaled by the integrand's spread
    // around its mean, floored at the rule's roundoff level.
    double spread = 0.0;
    for (int i = 0; i < 15; ++i) spread += gk15::kWeightsK[i] * std::abs(fs[i] - 0.5 * k);
    spread *= ah;
    double err = ah * std::abs(k - g);
    if (spread != 0.0 && err != 0.0) err = spread * std::min(1.0, std::pow(200.0 * err / spread, 1.5));
    const double floor = 50.0 * kEps * ah * ka;
    err = std::max(err, floor);
    Seg s{lo, hi, h * k, err, false};
    const double mid = 0.5 * (lo + hi);
    s.final = err <= floor || mid <= std::min(lo, hi) || mid >= std::max(lo, hi);
    return s;
  };
  std::vector<Seg> segs{rule(a, b)};
  auto worse = [&](std::size_t i, std::size_t j) { return segs[i].error < segs[j].error; };
  std::vector<std::size_t> heap;
  if (!segs[0].final) heap.push_back(0);
  double total_err = segs[0].error;
  double total_val = segs[0].value;
  while (!heap.empty()) {
    if (total_err <= std::max(abs_tol, rel_tol * std::abs(total_val))) break;
    if (static_cast<int>(segs.size()) >= max_segments) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const std::size_t i = heap.back();
    heap.pop_back();
    const Seg s = segs[i];
    const double mid = 0.5 * (s.a + s.b);
    segs[i] = rule(s.a, mid);
    segs.push_back(rule(mid, s.b));
    total_err += segs[i].error + segs.back().error - s.error;
    total_val += segs[i].value + segs.back().value - s.value;
    for (std::size_t k : {i, segs.size() - 1}) {
      if (segs[k].final) continue;
      heap.push_back(k);
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
  if (heap.empty() && total_err > std::max(abs_tol, rel_tol * std::abs(total_val))) out.converged = false;
  // Final sums in left-to-right order so results do not depend on the split history.
  std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  CompensatedSum value, error;
  for (const auto& s : segs) {
    value.add(s.value);
    error.add(s.error);
  }
  out.value = value.value();
  out.error = error.value();
  return out;
}

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon();

struct PanelPlanner {
  const PhaseFunction& g;
  double lam;
  double cap;
  std::int64_t budget;
  std::vector<Interval>& out;

  void split(double a, double b, double ga, double gb) {
    const double swing = lam * std::abs(gb - ga);
    if (swing <= cap || b - a <= 8.0 * kUnit * std::max(std::abs(a), std::abs(b))) {
      out.push_back({a, b});
      if (static_cast<std::int64_t>(out.size()) > budget) {
        fail(ErrorCode::PanelBudget, "more than " + std::to_string(budget) +
                                         " panels needed; lambda too large for this configuration");
      }
      return;
    }
    const auto m = static_cast<std::size_t>(std::clamp(std::ceil(swing / cap), 2.0, 65536.0));
    std::vector<double> xs(m + 1);
    std::vector<double> gs(m + 1);
    for (std::size_t i = 0; i <= m; ++i) xs[i] = a + (b - a) * static_cast<double>(i) / m;
    xs[m] = b;
    g.eval_batch(0, xs, gs);
    gs[0] = ga;
    gs[m] = gb;
    for (std::size_t i = 0; i < m; ++i) split(xs[i], xs[i + 1], gs[i], gs[i + 1]);
  }
};

struct PanelValue {
  std::complex<double> value;
  double error = 0.0;
  double rounding_sq = 0.0;
  std::int64_t panels = 1;
};

// Evaluates GK15 on a batch of panels: one phase batch, one sincos batch.
void eval_panels(const PhaseFunction& g, double lam, std::span<const Interval> panels,
                 std::vector<PanelValue>& out) {
  const std::size_t n = panels.size() * 15;
  thread_local std::vector<double> xs;
  thread_local std::vector<double> th;
  thread_local std::vector<double> sn;
  thread_local std::vector<double> cs;
  xs.resize(n);
  th.resize(n);
  sn.resize(n);
  cs.resize(n);
  for (std::size_t p = 0; p < panels.size(); ++p) gk15::abscissae(panels[p].lo, panels[p].hi, &xs[15 * p]);
  g.eval_batch(0, xs, th);
  for (std::size_t i = 0; i < n; ++i) th[i] *= lam;
  kernels::sincos(th, sn, cs);
  out.resize(panels.size());
  for (std::size_t p = 0; p < panels.size(); ++p) {
    double kr = 0.0, ki = 0.0, gr = 0.0, gi = 0.0, rs = 0.0;
    for (int k = 0; k < 15; ++k) {
      const std::size_t i = 15 * p + k;
      kr += gk15::kWeightsK[k] * cs[i];
      ki += gk15::kWeightsK[k] * sn[i];
      gr += gk15::kWeightsG[k] * cs[i];
      gi += gk15::kWeightsG[k] * sn[i];
      const double r = gk15::kWeightsK[k] * (1.0 + std::abs(th[i]));
      rs += r * r;
    }
    const double h = 0.5 * panels[p].length();
    out[p].value = {h * kr, h * ki};
    out[p].error = h * std::hypot(kr - gr, ki - gi);
    out[p].rounding_sq = h * h * rs;
    out[p].panels = 1;
  }
}

PanelValue refine(const PhaseFunction& g, double lam, Interval panel, double tol_per_length, int depth) {
  const double mid = panel.mid();
  std::vector<Interval> halves{{panel.lo, mid}, {mid, panel.hi}};
  std::vector<PanelValue> vals;
  eval_panels(g, lam, halves, vals);
  PanelValue total;
  total.panels = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    PanelValue v = vals[i];
    if (v.error > tol_per_length * halves[i].length() && depth < 30 && halves[i].length() > 1e-14) {
      v = refine(g, lam, halves[i], tol_per_length, depth + 1);
    }
    total.value += v.value;
    total.error += v.error;
    total.rounding_sq += v.rounding_sq;
    total.panels += v.panels;
  }
  return total;
}

}  // namespace

QuadResult osc_integrate_1d(const PhaseFunction& g, double lambda, Interval I, const QuadConfig& cfg) {
  cfg.validate();
  require(std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite");
  require(I.lo <= I.hi, ErrorCode::InvalidArgument, "integration interval must have lo <= hi");
  const Interval dom = g.domain();
  const double slack = 1e-14 * (1.0 + std::max(std::abs(dom.lo), std::abs(dom.hi)));
  if (I.lo < dom.lo - slack || I.hi > dom.hi + slack) {
    fail(ErrorCode::Domain, "integration interval lies outside the phase domain of " + g.name());
  }
  I.lo = std::max(I.lo, dom.lo);
  I.hi = std::min(I.hi, dom.hi);

  QuadResult result;
  result.lambda = lambda;
  if (I.length() == 0.0) return result;
  if (lambda == 0.0) {
    result.value = I.length();
    result.panels_used = 1;
    return result;
  }
  require(g.max_order() >= 1, ErrorCode::InvalidArgument,
          "oscillatory quadrature needs the first derivative of the phase");
  const double lam = std::abs(lambda);

  PartitionOptions popt;
  popt.samples_per_unit = cfg.partition_density;
  const int first[] = {1};
  const auto pieces = split_by_orders(g, first, I, popt);

  std::vector<Interval> panels;
  PanelPlanner planner{g, lam, cfg.phase_variation_cap, cfg.max_panels, panels};
  for (const auto& piece : pieces) planner.split(piece.lo, piece.hi, g(piece.lo), g(piece.hi));

  const double tol_per_length = 0.1 * cfg.rel_tol;
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum err;
  double rounding_sq = 0.0;
  std::int64_t used = 0;
  std::vector<PanelValue> vals;
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < panels.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, panels.size() - start);
    const std::span<const Interval> chunk(panels.data() + start, count);
    eval_panels(g, lam, chunk, vals);
    for (std::size_t p = 0; p < count; ++p) {
      PanelValue v = vals[p];
      if (v.error > tol_per_length * chunk[p].length()) v = refine(g, lam, chunk[p], tol_per_length, 1);
      re.add(v.value.real());
      im.add(v.value.imag());
      err.add(v.error);
      rounding_sq += v.rounding_sq;
      used += v.panels;
    }
    if (used > cfg.max_panels) {
      fail(ErrorCode::PanelBudget, "adaptive refinement exceeded " + std::to_string(cfg.max_panels) + " panels");
    }
  }
  // Phase rounding behaves like independent per-node perturbations of size
  // u * |theta|; the compensated sums contribute nothing at this order.
  const double rounding = 4.0 * kUnit * std::sqrt(rounding_sq);
  result.value = {re.value(), lambda < 0 ? -im.value() : im.value()};
  result.error_estimate = err.value() + rounding;
  result.panels_used = used;
  return result;
}

}  // namespace oscint
