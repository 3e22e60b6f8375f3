#include "oscint/cert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>

#include <json.hpp>

#include "oscint/error.hpp"
#include "oscint/parallel.hpp"
#include "oscint/sublevel.hpp"

namespace oscint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack on the integration-by-parts hypotheses.
constexpr double kHypSlack = 1e-9;

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

// {x in [a, b] : lo_v <= F(x) <= hi_v} for F monotone on [a, b].
std::optional<Interval> monotone_preimage(const std::function<double(double)>& F, double a, double b, double lo_v,
                                          double hi_v) {
  const double fa = F(a);
  const double fb = F(b);
  double left, right;
  if (fa <= fb) {
    if (fb < lo_v || fa > hi_v) return std::nullopt;
    left = fa >= lo_v ? a : first_true(a, b, [&](double x) { return F(x) >= lo_v; });
    right = fb <= hi_v ? b : first_true(a, b, [&](double x) { return F(x) > hi_v; });
  } else {
    if (fa < lo_v || fb > hi_v) return std::nullopt;
    left = fa <= hi_v ? a : first_true(a, b, [&](double x) { return F(x) <= hi_v; });
    right = fb >= lo_v ? b : first_true(a, b, [&](double x) { return F(x) < lo_v; });
  }
  if (right < left) return std::nullopt;
  return Interval{left, right};
}

// The outer map t -> P(t) as the pipeline sees it.
struct Outer {
  std::function<double(double)> dP;
  std::vector<double> breaks;   // P' is monotone between consecutive breaks
  std::vector<double> centers;  // distinct real parts of the roots of P'
  double radius = 0.0;          // cover radius
  double B_cover = 1.0;
  double d = 1.0;
  bool no_roots = false;  // P' constant
};

std::vector<double> distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || std::abs(x - out.back()) > 1e-12 * (1.0 + std::abs(x))) out.push_back(x);
  }
  return out;
}

SndConstant default_B(int degree) {
  static std::mutex mu;
  static std::map<int, SndConstant> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, estimate_B(degree, 4000, 0)).first;
  return it->second;
}

Outer polynomial_outer(const Polynomial& P, double lambda, double eps, const CertifyOptions& options) {
  Outer o;
  o.d = P.degree();
  const Polynomial dP = derivative(P);
  o.dP = [dP](double t) { return dP(t); };
  if (P.degree() == 1) {
    require(std::abs(P.leading() - 1.0) <= kClassifyTol, ErrorCode::NotNormalized,
            "a linear outer polynomial must have P' = 1");
    o.no_roots = true;
    return o;
  }
  const Classification cls = classify(dP);
  RootCover cover;
  if (cls.monic) {
    cover = monic_sublevel_cover(dP, eps);
  } else if (cls.snd) {
    require(std::abs(lambda) >= 1.0, ErrorCode::Precondition, "SND P' needs |lambda| >= 1");
    const SndConstant B = options.B ? *options.B : default_B(dP.degree());
    require(B.d == dP.degree(), ErrorCode::InvalidArgument, "SND constant degree does not match P'");
    cover = snd_sublevel_cover(dP, eps, B);
    o.B_cover = B.B;
  } else {
    fail(ErrorCode::NotNormalized, "P' is neither monic nor SND: " + cls.report);
  }
  o.centers = distinct(cover.centers);
  o.radius = cover.radius;
  if (dP.degree() >= 2) {
    const Polynomial ddP = derivative(dP);
    std::vector<double> br;
    for (const auto& z : roots(ddP).roots) {
      if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z))) br.push_back(z.real());
    }
    o.breaks = distinct(std::move(br));
  }
  return o;
}

struct Setup {
  double lambda = 0.0;  // |lambda|
  double eps = 0.0;
  double r = 0.0;
  double delta_sub = 0.0;
  double B_sub = 0.0;
  bool skip_small = false;
  std::string sublevel_formula;
};

struct PipelineOut {
  CertPiece removed;
  std::vector<CertPiece> small;
  std::vector<CertPiece> ibp;
  int violations = 0;
};

// The one-dimensional proof on the windows of f's domain.
PipelineOut pipeline(const PhaseFunction& f, const std::vector<Interval>& windows, const Outer& outer,
                     const Setup& s) {
  require(f.max_order() >= 2, ErrorCode::Precondition, "certificates need f'' (f' monotone pieces)");
  PipelineOut out;
  const double thr = std::pow(s.eps, outer.d - 1.0);
  const double rho = outer.radius;
  auto dPf = [&](double x) { return outer.dP(f(x)); };
  auto absfp = [&](double x) { return std::abs(f.eval(1, x)); };
  const int orders[] = {1, 2};

  std::vector<Interval> removed_all;
  bool formula_valid = true;
  double formula_sum = 0.0;
  for (const auto& W : windows) {
    if (W.length() <= 0.0) continue;
    std::vector<Interval> R;
    for (double c : outer.centers) {
      const auto sub = sublevel_1d(f, c, rho, W);
      R.insert(R.end(), sub.components.begin(), sub.components.end());
      formula_sum += s.B_sub * std::pow(rho, s.delta_sub);
    }
    R = merge_intervals(std::move(R));

    // Pieces where f, f' and P'(f) are all monotone.
    std::vector<Interval> base;
    for (const auto& p : split_by_orders(f, orders, W)) {
      std::vector<double> cuts{p.lo};
      const double fa = f(p.lo);
      const double fb = f(p.hi);
      for (double z : outer.breaks) {
        if (z > std::min(fa, fb) && z < std::max(fa, fb)) {
          cuts.push_back(first_true(p.lo, p.hi, [&](double x) { return fa <= fb ? f(x) >= z : f(x) <= z; }));
        }
      }
      cuts.push_back(p.hi);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) base.push_back({cuts[i], cuts[i + 1]});
      }
    }

    // The root cover must contain {|P'(f)| <= eps^(d-1)}; anything it misses joins the removed set.
    if (!outer.no_roots) {
      for (const auto& p : base) {
        const auto S = monotone_preimage(dPf, p.lo, p.hi, -thr, thr);
        if (!S) continue;
        const double slack = 1e-12 * (1.0 + std::abs(S->lo) + std::abs(S->hi));
        bool inside = false;
        for (const auto& c : R) inside = inside || (c.lo - slack <= S->lo && S->hi <= c.hi + slack);
        if (!inside) {
          ++out.violations;
          formula_valid = false;
          R.push_back(*S);
          R = merge_intervals(std::move(R));
        }
      }
    }
    removed_all.insert(removed_all.end(), R.begin(), R.end());

    for (const auto& p : base) {
      for (const auto& q : complement_in(clip_intervals(R, p), p)) {
        if (q.length() <= 0.0) continue;
        std::vector<Interval> small_parts, ibp_parts;
        if (s.skip_small) {
          ibp_parts.push_back(q);
        } else {
          const double va = absfp(q.lo);
          const double vb = absfp(q.hi);
          if (va >= s.r && vb >= s.r) {
            ibp_parts.push_back(q);
          } else if (va < s.r && vb < s.r) {
            small_parts.push_back(q);
          } else if (va < s.r) {
            const double t = first_true(q.lo, q.hi, [&](double x) { return absfp(x) >= s.r; });
            small_parts.push_back({q.lo, t});
            ibp_parts.push_back({t, q.hi});
          } else {
            const double t = first_true(q.lo, q.hi, [&](double x) { return absfp(x) < s.r; });
            ibp_parts.push_back({q.lo, t});
            small_parts.push_back({t, q.hi});
          }
        }
        for (const auto& piece : small_parts) {
          if (piece.length() <= 0.0) continue;
          CertPiece c;
          c.kind = PieceKind::SmallDerivative;
          c.support = {piece};
          c.measured = piece.length();
          c.formula_bound = s.delta_sub < 1.0 ? derivpush_bound(s.B_sub, s.delta_sub, s.r) : kInf;
          c.bound = std::min(c.measured, c.formula_bound);
          c.formula = c.formula_bound <= c.measured ? "derivpush" : "length";
          out.small.push_back(std::move(c));
        }
        for (const auto& piece : ibp_parts) {
          if (piece.length() <= 0.0) continue;
          CertPiece c;
          c.kind = PieceKind::IntegrationByParts;
          c.support = {piece};
          const double mf = std::min(absfp(piece.lo), absfp(piece.hi));
          const double mP = outer.no_roots ? 1.0 : std::min(std::abs(dPf(piece.lo)), std::abs(dPf(piece.hi)));
          c.measured = mf > 0.0 && mP > 0.0 ? 6.0 / (s.lambda * mf * mP) : kInf;
          c.formula_bound = ibp_bound(s.r, s.eps, outer.d, s.lambda);
          const bool hyp = mf >= s.r * (1.0 - kHypSlack) && mP >= thr * (1.0 - kHypSlack);
          if (hyp) {
            c.bound = c.formula_bound;
            c.formula = "ibp";
          } else {
            c.bound = std::min(c.measured, piece.length());
            c.formula = c.bound == c.measured ? "ibp_measured" : "length";
          }
          out.ibp.push_back(std::move(c));
        }
      }
    }
  }
  CertPiece& rem = out.removed;
  rem.kind = PieceKind::RemovedSublevel;
  rem.support = merge_intervals(std::move(removed_all));
  rem.measured = total_length(rem.support);
  rem.formula_bound = formula_valid ? formula_sum : kInf;
  rem.bound = std::min(rem.measured, rem.formula_bound);
  rem.formula = rem.formula_bound <= rem.measured ? s.sublevel_formula : "measure";
  return out;
}

void finalize(Certificate& cert) {
  CompensatedSum sum;
  for (const auto& p : cert.pieces) sum.add(p.bound);
  cert.total_bound = sum.value();
}

Certificate certify_1d_impl(const PhaseFunction& f, const Outer& outer, double lambda, const CertifyMode& mode) {
  const double lam = std::abs(lambda);
  const double d = outer.d;
  CertificateParams pr;
  pr.lambda = lambda;
  pr.d = d;
  pr.epsilon = std::pow(lam, -1.0 / d);
  pr.B_cover = outer.B_cover;
  Setup s;
  s.lambda = lam;
  s.eps = pr.epsilon;
  if (const auto* g = std::get_if<GeneralMode>(&mode)) {
    require(g->delta > 0.0 && g->delta < 1.0, ErrorCode::InvalidArgument, "general mode needs 0 < delta < 1");
    require(g->A >= 1.0, ErrorCode::InvalidArgument, "general mode needs A >= 1");
    pr.mode = CertMode::General;
    pr.delta = g->delta;
    pr.A = g->A;
    pr.N = f.meta().N;
    pr.r = std::pow(lam, -(1.0 - g->delta) / d);
    s.B_sub = osc_to_sublevel_constant(g->delta).C_delta * g->A;
    s.delta_sub = g->delta;
    s.sublevel_formula = "C_delta*A*rho^delta";
  } else {
    const int N = std::get<VdcMode>(mode).N;
    require(N >= 1, ErrorCode::InvalidArgument, "vdc mode needs N >= 1");
    require(f.max_order() >= N, ErrorCode::Precondition, "vdc mode needs f^(N)");
    const auto a = f.meta().derivative_lower_bound;
    require(a.has_value() && *a >= 1.0, ErrorCode::Precondition, "vdc mode needs a declared |f^(N)| >= 1");
    const Interval I = f.domain();
    for (int i = 0; i <= 1024; ++i) {
      const double x = I.lo + I.length() * i / 1024.0;
      require(std::abs(f.eval(N, x)) >= *a * (1.0 - kHypSlack), ErrorCode::Precondition,
              "declared lower bound on |f^(N)| fails on the sample grid");
    }
    pr.mode = CertMode::Vdc;
    pr.N = N;
    pr.delta = 1.0 / N;
    pr.derivative_lower = *a;
    pr.r = std::pow(lam, -(N - 1.0) / (N * d));
    s.B_sub = 2.0 * N * std::pow(*a, -1.0 / N);
    s.delta_sub = 1.0 / N;
    s.skip_small = N == 1;
    s.sublevel_formula = "2N*(rho/a)^(1/N)";
  }
  s.r = pr.r;
  pr.sublevel_B = s.B_sub;

  PipelineOut po = pipeline(f, {f.domain()}, outer, s);
  Certificate cert;
  cert.params = pr;
  cert.inclusion_violations = po.violations;
  cert.pieces.push_back(std::move(po.removed));
  for (auto& p : po.small) cert.pieces.push_back(std::move(p));
  for (auto& p : po.ibp) cert.pieces.push_back(std::move(p));
  std::sort(cert.pieces.begin() + 1, cert.pieces.end(),
            [](const CertPiece& a, const CertPiece& b) { return a.support.front().lo < b.support.front().lo; });
  finalize(cert);
  return cert;
}

}  // namespace

const char* to_string(PieceKind kind) noexcept {
  switch (kind) {
    case PieceKind::RemovedSublevel: return "removed_sublevel";
    case PieceKind::SmallDerivative: return "small_derivative";
    case PieceKind::IntegrationByParts: return "integration_by_parts";
    case PieceKind::SliceSmallMixed: return "slice_small_mixed";
  }
  return "unknown";
}

double Certificate::covered_length() const {
  double s = 0.0;
  for (const auto& p : pieces) s += total_length(p.support);
  return s;
}

double Certificate::bound_of(PieceKind kind) const {
  double s = 0.0;
  for (const auto& p : pieces) {
    if (p.kind == kind) s += p.bound;
  }
  return s;
}

bool Certificate::sound() const {
  if (!verified_against) return false;
  return std::abs(verified_against->value) <= total_bound + verified_against->error_estimate;
}

double derivpush_bound(double B, double delta, double r) {
  require(B > 0.0 && r > 0.0, ErrorCode::InvalidArgument, "derivpush needs B > 0 and r > 0");
  require(delta > 0.0 && delta < 1.0, ErrorCode::InvalidArgument, "derivpush needs 0 < delta < 1");
  return std::pow(B / std::pow(2.0, delta), 1.0 / (1.0 - delta)) * std::pow(r, delta / (1.0 - delta));
}

double ibp_bound(double r, double eps, double d, double lambda) {
  require(lambda != 0.0, ErrorCode::InvalidArgument, "ibp bound needs lambda != 0");
  require(r > 0.0 && eps > 0.0, ErrorCode::InvalidArgument, "ibp bound needs r, eps > 0");
  return 6.0 / (r * std::abs(lambda) * std::pow(eps, d - 1.0));
}

Certificate certify_1d(const PhaseFunction& f, const Polynomial& P, double lambda, const CertifyMode& mode,
                       const CertifyOptions& options) {
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite and nonzero");
  require(P.degree() >= 2, ErrorCode::Precondition, "certify_1d needs deg P >= 2");
  const double eps = std::pow(std::abs(lambda), -1.0 / P.degree());
  const Outer outer = polynomial_outer(P, lambda, eps, options);
  return certify_1d_impl(f, outer, lambda, mode);
}

Certificate certify_1d_abs_power(const PhaseFunction& f, double s, double lambda, const CertifyMode& mode,
                                 const CertifyOptions&) {
  require(lambda != 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite and nonzero");
  require(s > 1.0, ErrorCode::Precondition, "|t|^s certificates need s > 1");
  // P'(t) = s |t|^(s-1) sgn t is increasing, and |P'(t)| <= eps^(s-1) forces |t| <= s^(-1/(s-1)) eps <= eps.
  Outer o;
  o.d = s;
  o.dP = [s](double t) { return std::copysign(s * std::pow(std::abs(t), s - 1.0), t); };
  o.centers = {0.0};
  o.radius = std::pow(std::abs(lambda), -1.0 / s);
  return certify_1d_impl(f, o, lambda, mode);
}

Certificate certify_2d(const Phase2D& f, const PlanarDomain& X, const Polynomial& P, double lambda,
                       const CertifyOptions& options) {
  require(std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be finite");
  const auto beta = f.beta();
  const int b1 = beta[0];
  const int b2 = beta[1];
  require(b1 >= 1 && b2 >= 1, ErrorCode::Precondition, "certify_2d needs beta_1, beta_2 >= 1");
  const auto mo = f.max_orders();
  require(mo[0] >= b1 && mo[1] >= std::max(b2 + 1, 2), ErrorCode::Precondition,
          "certify_2d needs d_x^beta1 d_y^beta2 f, d_y^(beta2+1) f and d_y^2 f");
  const double lam = std::abs(lambda);
  require(lam >= 1.0, ErrorCode::Precondition, "certify_2d needs |lambda| >= 1");
  require(options.slice_samples >= 1, ErrorCode::InvalidArgument, "slice_samples must be positive");

  // |d^beta f| >= 1 on a sample grid of every rectangle.
  for (const auto& R : X.pieces()) {
    for (int i = 0; i <= 32; ++i) {
      for (int j = 0; j <= 32; ++j) {
        const double x = R.x.lo + R.x.length() * i / 32.0;
        const double y = R.y.lo + R.y.length() * j / 32.0;
        require(std::abs(f.eval(b1, b2, x, y)) >= 1.0 - kHypSlack, ErrorCode::Precondition,
                "|d^beta f| >= 1 fails on the sample grid");
      }
    }
  }

  const int d = P.degree();
  const double bsum = b1 + b2;
  CertificateParams pr;
  pr.lambda = lambda;
  pr.d = d;
  pr.mode = CertMode::Vdc;
  pr.N = b2;
  pr.epsilon = 1.0 / std::pow(lam, 1.0 / d);
  double gamma;
  if (d == 1) {
    gamma = std::pow(lam, -b1 / bsum);
    pr.r = b2 == 1 ? gamma : std::pow(gamma, 1.0 / b2) * std::pow(lam, -(b2 - 1.0) / b2);
  } else if (b2 > 1) {
    gamma = std::pow(lam, -b1 / (d * bsum));
    pr.r = std::pow(lam, -1.0 / d + 1.0 / (d * bsum));
  } else {
    gamma = std::pow(lam, -(bsum - 1.0) / (d * bsum));
    pr.r = gamma;
  }
  pr.gamma = gamma;
  pr.delta = 1.0 / (d * bsum);
  pr.derivative_lower = gamma;
  const Outer outer = polynomial_outer(P, lambda, pr.epsilon, options);
  pr.B_cover = outer.B_cover;

  Setup s;
  s.lambda = lam;
  s.eps = pr.epsilon;
  s.r = pr.r;
  s.delta_sub = 1.0 / b2;
  s.B_sub = 2.0 * b2 * std::pow(gamma, -1.0 / b2);
  s.skip_small = b2 == 1;
  s.sublevel_formula = "2N*(rho/gamma)^(1/N)";
  pr.sublevel_B = s.B_sub;

  const Rect box = X.bounding_box();
  const int S = options.slice_samples;
  Certificate cert;
  cert.params = pr;

  // Region |d_y^beta2 f| >= gamma: slice-wise proof in y, sup over the x samples of each strip.
  const auto xb = X.x_breaks();
  for (std::size_t k = 0; k + 1 < xb.size(); ++k) {
    const double a = xb[k];
    const double b = xb[k + 1];
    if (b <= a) continue;
    struct SliceSums {
      double bound[3] = {0, 0, 0};
      double formula[3] = {0, 0, 0};
      double measured[3] = {0, 0, 0};
      int violations = 0;
    };
    std::vector<SliceSums> sums(static_cast<std::size_t>(S) + 1);
    parallel_for(S + 1, options.threads, [&](int i) {
      // Interior samples only: slices at the strip edges can change shape.
      const double x = a + (b - a) * (i + 0.5) / (S + 1);
      const auto ys = X.slice_y(x);
      if (static_cast<int>(ys.size()) > X.slice_bound()) {
        fail(ErrorCode::SliceOverflow, "slice at x = " + std::to_string(x) + " exceeds the slice bound");
      }
      const PhaseFunction g = f.slice_y(x, box.y);
      PhaseMeta hm;
      const PhaseFunction h = closure_phase([&f, x, b2](int o, double y) { return f.eval(0, b2 + o, x, y); },
                                            mo[1] - b2, box.y, hm, "d_y^beta2 f");
      std::vector<Interval> windows;
      for (const auto& J : ys) {
        const auto low = sublevel_1d(h, 0.0, gamma, J);
        for (const auto& w : complement_in(low.components, J)) {
          if (w.length() > 0.0) windows.push_back(w);
        }
      }
      const PipelineOut po = pipeline(g, windows, outer, s);
      SliceSums& t = sums[static_cast<std::size_t>(i)];
      t.violations = po.violations;
      t.bound[0] = po.removed.bound;
      t.formula[0] = po.removed.formula_bound;
      t.measured[0] = po.removed.measured;
      for (const auto& p : po.small) {
        t.bound[1] += p.bound;
        t.formula[1] += p.formula_bound;
        t.measured[1] += p.measured;
      }
      for (const auto& p : po.ibp) {
        t.bound[2] += p.bound;
        t.formula[2] += p.formula_bound;
        t.measured[2] += p.measured;
      }
    });
    const PieceKind kinds[3] = {PieceKind::RemovedSublevel, PieceKind::SmallDerivative,
                                PieceKind::IntegrationByParts};
    for (int kind = 0; kind < 3; ++kind) {
      CertPiece c;
      c.kind = kinds[kind];
      c.region = {Rect{{a, b}, box.y}};
      for (const auto& t : sums) {
        c.bound = std::max(c.bound, t.bound[kind]);
        c.formula_bound = std::max(c.formula_bound, t.formula[kind]);
        c.measured = std::max(c.measured, t.measured[kind]);
      }
      c.bound *= b - a;
      c.formula_bound *= b - a;
      c.measured *= b - a;
      c.formula = "strip_sup";
      if (kind == 1 && s.skip_small) continue;
      cert.pieces.push_back(std::move(c));
    }
    for (const auto& t : sums) cert.inclusion_violations += t.violations;
  }

  // Region |d_y^beta2 f| < gamma: its x-slices are sublevel sets of a function with |d_x^beta1| >= 1.
  const auto ybk = X.y_breaks();
  for (std::size_t k = 0; k + 1 < ybk.size(); ++k) {
    const double a = ybk[k];
    const double b = ybk[k + 1];
    if (b <= a) continue;
    std::vector<double> measured(static_cast<std::size_t>(S) + 1, 0.0);
    std::vector<double> formula(static_cast<std::size_t>(S) + 1, 0.0);
    parallel_for(S + 1, options.threads, [&](int i) {
      const double y = a + (b - a) * (i + 0.5) / (S + 1);
      const auto xs = X.slice_x(y);
      if (static_cast<int>(xs.size()) > X.slice_bound()) {
        fail(ErrorCode::SliceOverflow, "slice at y = " + std::to_string(y) + " exceeds the slice bound");
      }
      PhaseMeta hm;
      const PhaseFunction h = closure_phase([&f, y, b2](int o, double x) { return f.eval(o, b2, x, y); },
                                            std::min(mo[0], 1), box.x, hm, "d_y^beta2 f");
      double m = 0.0;
      for (const auto& J : xs) m += sublevel_1d(h, 0.0, gamma, J).measure;
      measured[static_cast<std::size_t>(i)] = m;
      formula[static_cast<std::size_t>(i)] = xs.size() * 2.0 * b1 * std::pow(gamma, 1.0 / b1);
    });
    CertPiece c;
    c.kind = PieceKind::SliceSmallMixed;
    c.region = {Rect{box.x, {a, b}}};
    c.measured = (b - a) * *std::max_element(measured.begin(), measured.end());
    c.formula_bound = (b - a) * *std::max_element(formula.begin(), formula.end());
    c.bound = std::min(c.measured, c.formula_bound);
    c.formula = c.formula_bound <= c.measured ? "2*beta1*gamma^(1/beta1)" : "strip_sup_measure";
    cert.pieces.push_back(std::move(c));
  }
  finalize(cert);
  return cert;
}

bool verify(Certificate& cert, const QuadResult& q) {
  cert.verified_against = q;
  return cert.sound();
}

std::string to_json(const Certificate& cert, int indent) {
  using nlohmann::json;
  auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  const auto& p = cert.params;
  j["params"] = {{"epsilon", p.epsilon},
                 {"r", p.r},
                 {"gamma", p.gamma ? json(*p.gamma) : json(nullptr)},
                 {"lambda", p.lambda},
                 {"delta", p.delta},
                 {"d", p.d},
                 {"mode", p.mode == CertMode::General ? "general" : "vdc"},
                 {"N", p.N},
                 {"A", p.A},
                 {"B_cover", p.B_cover},
                 {"sublevel_B", p.sublevel_B},
                 {"derivative_lower", p.derivative_lower}};
  json pieces = json::array();
  for (const auto& c : cert.pieces) {
    json pc;
    pc["kind"] = to_string(c.kind);
    json sup = json::array();
    for (const auto& iv : c.support) sup.push_back({iv.lo, iv.hi});
    pc["support"] = sup;
    json reg = json::array();
    for (const auto& R : c.region) reg.push_back({{R.x.lo, R.x.hi}, {R.y.lo, R.y.hi}});
    pc["region"] = reg;
    pc["bound"] = num(c.bound);
    pc["formula"] = c.formula;
    pc["formula_bound"] = num(c.formula_bound);
    pc["measured"] = num(c.measured);
    pieces.push_back(pc);
  }
  j["pieces"] = pieces;
  j["total_bound"] = num(cert.total_bound);
  j["inclusion_violations"] = cert.inclusion_violations;
  if (cert.verified_against) {
    const auto& q = *cert.verified_against;
    j["verified_against"] = {{"re", q.value.real()},
                             {"im", q.value.imag()},
                             {"error_estimate", q.error_estimate},
                             {"panels", q.panels_used},
                             {"sound", cert.sound()}};
  }
  return j.dump(indent);
}

}  // namespace oscint
