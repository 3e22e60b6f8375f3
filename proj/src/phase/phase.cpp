#include "oscint/phase.hpp"

#include <algorithm>
#include <cmath>

#include "oscint/error.hpp"
#include "oscint/kernels.hpp"

namespace oscint {

void PhaseModel::eval_batch(int order, std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(order, xs[i]);
}

namespace {

PhaseMeta normalized(PhaseMeta meta) {
  require(meta.N >= 1, ErrorCode::InvalidArgument, "phase meta N must be >= 1");
  if (meta.derivative_lower_bound) {
    require(*meta.derivative_lower_bound >= 0.0, ErrorCode::InvalidArgument,
            "derivative lower bound must be nonnegative");
    if (!meta.claimed_delta) meta.claimed_delta = 1.0 / meta.N;
  }
  if (meta.claimed_delta) {
    require(*meta.claimed_delta > 0.0 && *meta.claimed_delta <= 1.0, ErrorCode::InvalidArgument,
            "claimed delta must lie in (0, 1]");
  }
  if (meta.claimed_A) {
    require(*meta.claimed_A >= 1.0, ErrorCode::InvalidArgument, "claimed A must be >= 1");
  }
  return meta;
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

std::vector<double> derivative_coeffs(const std::vector<double>& c, int order) {
  if (order >= static_cast<int>(c.size())) return {0.0};
  std::vector<double> out(c.size() - order);
  for (std::size_t k = order; k < c.size(); ++k) out[k - order] = c[k] * falling(static_cast<int>(k), order);
  return out;
}

double horner_eval(const std::vector<double>& c, double x) {
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

// Coefficient-vector polynomial that, unlike Polynomial, may be identically zero.
class PolyModel final : public PhaseModel {
 public:
  explicit PolyModel(std::vector<double> c) {
    if (c.empty()) c.push_back(0.0);
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    for (int k = 0; k <= static_cast<int>(c.size()); ++k) derivs_.push_back(derivative_coeffs(c, k));
  }
  double eval(int order, double x) const override { return horner_eval(coeffs(order), x); }
  void eval_batch(int order, std::span<const double> xs, std::span<double> out) const override {
    kernels::horner(coeffs(order), xs, out);
  }
  const std::vector<double>& coeffs(int order) const {
    return derivs_[std::min<std::size_t>(order, derivs_.size() - 1)];
  }

 private:
  std::vector<std::vector<double>> derivs_;
};

class TranscendentalModel final : public PhaseModel {
 public:
  enum class Kind { Sine, Exp };
  TranscendentalModel(std::optional<Polynomial> base, Kind kind, double amp, double rate, double shift)
      : base_(base ? base->coeffs() : std::vector<double>{0.0}),
        kind_(kind),
        amp_(amp),
        rate_(rate),
        shift_(shift) {}

  double eval(int order, double x) const override {
    const double scale = amp_ * std::pow(rate_, order);
    double t;
    if (kind_ == Kind::Sine) {
      const double arg = rate_ * x + shift_;
      switch (order % 4) {
        case 0: t = scale * std::sin(arg); break;
        case 1: t = scale * std::cos(arg); break;
        case 2: t = -scale * std::sin(arg); break;
        default: t = -scale * std::cos(arg); break;
      }
    } else {
      t = scale * std::exp(rate_ * x);
    }
    return base_.eval(order, x) + t;
  }

 private:
  PolyModel base_;
  Kind kind_;
  double amp_;
  double rate_;
  double shift_;
};

class ClosureModel final : public PhaseModel {
 public:
  explicit ClosureModel(PhaseClosure fn) : fn_(std::move(fn)) {}
  double eval(int order, double x) const override { return fn_(order, x); }

 private:
  PhaseClosure fn_;
};

class ComposedModel final : public PhaseModel {
 public:
  ComposedModel(const Polynomial& P, PhaseFunction f) : outer_(P.coeffs()), f_(std::move(f)) {}

  double eval(int order, double x) const override {
    const double u = f_.eval(0, x);
    if (order == 0) return outer_.eval(0, u);
    const double d1 = f_.eval(1, x);
    if (order == 1) return outer_.eval(1, u) * d1;
    const double d2 = f_.eval(2, x);
    if (order == 2) return outer_.eval(2, u) * d1 * d1 + outer_.eval(1, u) * d2;
    const double d3 = f_.eval(3, x);
    return outer_.eval(3, u) * d1 * d1 * d1 + 3.0 * outer_.eval(2, u) * d1 * d2 + outer_.eval(1, u) * d3;
  }

  void eval_batch(int order, std::span<const double> xs, std::span<double> out) const override {
    if (order > 1) {
      PhaseModel::eval_batch(order, xs, out);
      return;
    }
    thread_local std::vector<double> u;
    thread_local std::vector<double> du;
    u.resize(xs.size());
    f_.eval_batch(0, xs, u);
    outer_.eval_batch(order, u, out);
    if (order == 1) {
      du.resize(xs.size());
      f_.eval_batch(1, xs, du);
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= du[i];
    }
  }

 private:
  PolyModel outer_;
  PhaseFunction f_;
};

class AbsPowerModel final : public PhaseModel {
 public:
  AbsPowerModel(PhaseFunction f, double s) : f_(std::move(f)), s_(s) {}

  double eval(int order, double x) const override {
    const double u = f_.eval(0, x);
    if (order == 0) return std::pow(std::abs(u), s_);
    const double du = f_.eval(1, x);
    if (u == 0.0) {
      if (s_ > 1.0 || du == 0.0) return 0.0;
      if (s_ == 1.0) return std::abs(du);
      return std::copysign(std::numeric_limits<double>::infinity(), du);
    }
    return s_ * std::pow(std::abs(u), s_ - 1.0) * (u > 0 ? 1.0 : -1.0) * du;
  }

  void eval_batch(int order, std::span<const double> xs, std::span<double> out) const override {
    if (order != 0) {
      PhaseModel::eval_batch(order, xs, out);
      return;
    }
    f_.eval_batch(0, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::pow(std::abs(out[i]), s_);
  }

 private:
  PhaseFunction f_;
  double s_;
};

void check_domain(Interval d) {
  require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi, ErrorCode::InvalidArgument,
          "phase domain must be a finite interval with lo < hi");
}

}  // namespace

PhaseFunction::PhaseFunction(std::shared_ptr<const PhaseModel> model, int max_order, Interval domain,
                             PhaseMeta meta, std::string name)
    : model_(std::move(model)),
      max_order_(max_order),
      domain_(domain),
      meta_(normalized(std::move(meta))),
      name_(std::move(name)) {
  require(model_ != nullptr, ErrorCode::InvalidArgument, "phase model is null");
  require(max_order_ >= 0, ErrorCode::InvalidArgument, "max_order must be >= 0");
  check_domain(domain_);
}

double PhaseFunction::eval(int order, double x) const {
  require(order >= 0 && order <= max_order_, ErrorCode::InvalidArgument,
          "derivative order exceeds the phase's max_order");
  return model_->eval(order, x);
}

void PhaseFunction::eval_batch(int order, std::span<const double> xs, std::span<double> out) const {
  require(order >= 0 && order <= max_order_, ErrorCode::InvalidArgument,
          "derivative order exceeds the phase's max_order");
  require(out.size() >= xs.size(), ErrorCode::InvalidArgument, "output span too short");
  model_->eval_batch(order, xs, out);
}

PhaseFunction PhaseFunction::with_domain(Interval domain) const {
  return PhaseFunction(model_, max_order_, domain, meta_, name_);
}

PhaseFunction PhaseFunction::with_meta(PhaseMeta meta) const {
  return PhaseFunction(model_, max_order_, domain_, std::move(meta), name_);
}

namespace {

constexpr int kPolyMaxOrder = 32;

PhaseMeta polynomial_meta(const std::vector<double>& c, Interval domain) {
  PhaseMeta m;
  const int d = static_cast<int>(c.size()) - 1;
  m.N = std::max(1, d);
  if (d >= 1) m.derivative_lower_bound = std::abs(c.back()) * falling(d, d);
  m.single_sign_orders = {d};
  // Monomials are single-signed at every order away from the origin.
  bool mono = true;
  for (int k = 0; k < d; ++k) mono = mono && c[k] == 0.0;
  if (mono && domain.lo >= 0.0) {
    m.single_sign_orders.clear();
    for (int k = 0; k <= d; ++k) m.single_sign_orders.push_back(k);
  }
  return m;
}

std::string poly_name(const std::vector<double>& c) {
  std::string s = "poly[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", c[i]);
    s += buf;
  }
  return s + "]";
}

}  // namespace

PhaseFunction monomial_phase(int n, Interval domain, double coeff) {
  require(n >= 1, ErrorCode::InvalidArgument, "monomial degree must be >= 1");
  require(coeff != 0.0, ErrorCode::InvalidArgument, "monomial coefficient must be nonzero");
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = coeff;
  auto meta = polynomial_meta(c, domain);
  const std::string name = coeff == 1.0 ? "x^" + std::to_string(n) : poly_name(c);
  return PhaseFunction(std::make_shared<PolyModel>(c), kPolyMaxOrder, domain, meta, name);
}

PhaseFunction polynomial_phase(const Polynomial& p, Interval domain) {
  return PhaseFunction(std::make_shared<PolyModel>(p.coeffs()), kPolyMaxOrder, domain,
                       polynomial_meta(p.coeffs(), domain), poly_name(p.coeffs()));
}

PhaseFunction sine_phase(std::optional<Polynomial> base, double amp, double freq, double shift,
                         Interval domain) {
  PhaseMeta m;
  std::string name = "sin";
  if (base) name = poly_name(base->coeffs()) + "+sin";
  return PhaseFunction(std::make_shared<TranscendentalModel>(
                           std::move(base), TranscendentalModel::Kind::Sine, amp, freq, shift),
                       kPolyMaxOrder, domain, m, name);
}

PhaseFunction exp_phase(std::optional<Polynomial> base, double amp, double rate, Interval domain) {
  std::string name = "exp";
  if (base) name = poly_name(base->coeffs()) + "+exp";
  return PhaseFunction(std::make_shared<TranscendentalModel>(
                           std::move(base), TranscendentalModel::Kind::Exp, amp, rate, 0.0),
                       kPolyMaxOrder, domain, PhaseMeta{}, name);
}

PhaseFunction closure_phase(PhaseClosure fn, int max_order, Interval domain, PhaseMeta meta,
                            std::string name) {
  require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "closure phase needs a callable");
  return PhaseFunction(std::make_shared<ClosureModel>(std::move(fn)), max_order, domain,
                       std::move(meta), std::move(name));
}

PhaseFunction composed_phase(const Polynomial& P, const PhaseFunction& f) {
  const int order = std::min(3, f.max_order());
  return PhaseFunction(std::make_shared<ComposedModel>(P, f), order, f.domain(), PhaseMeta{},
                       poly_name(P.coeffs()) + "(" + f.name() + ")");
}

PhaseFunction abs_power_phase(const PhaseFunction& f, double s) {
  require(s > 0.0 && std::isfinite(s), ErrorCode::InvalidArgument, "abs power exponent must be > 0");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", s);
  return PhaseFunction(std::make_shared<AbsPowerModel>(f, s), std::min(1, f.max_order()), f.domain(),
                       PhaseMeta{}, "|" + f.name() + "|^" + buf);
}

// ---------------------------------------------------------------------------

std::vector<SignPiece> sign_partition(const PhaseFunction& f, int order, const PartitionOptions& options) {
  return sign_partition(f, order, f.domain(), options);
}

std::vector<SignPiece> sign_partition(const PhaseFunction& f, int order, Interval window,
                                      const PartitionOptions& options) {
  require(order >= 0 && order <= f.max_order(), ErrorCode::InvalidArgument,
          "partition order exceeds the phase's max_order");
  require(options.tol > 0.0, ErrorCode::InvalidArgument, "partition tolerance must be positive");
  require(window.lo <= window.hi, ErrorCode::InvalidArgument, "partition window is empty");
  const double len = window.length();
  if (len == 0.0) return {{window, 0}};

  const auto n = static_cast<std::size_t>(
      std::max<double>(options.min_samples, std::ceil(options.samples_per_unit * len)));
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = window.lo + len * static_cast<double>(i) / n;
  xs[n] = window.hi;
  std::vector<double> vs(n + 1);
  f.eval_batch(order, xs, vs);

  auto sgn = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  std::vector<SignPiece> pieces;
  double start = window.lo;
  int current = 0;
  double last_x = window.lo;  // last sample carrying the current sign
  for (std::size_t i = 0; i <= n; ++i) {
    const int s = sgn(vs[i]);
    if (s == 0) continue;
    if (current == 0) {
      current = s;
    } else if (s != current) {
      double lo = last_x;
      double hi = xs[i];
      while (hi - lo > options.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sgn(f.eval(order, mid)) == current) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double cut = 0.5 * (lo + hi);
      pieces.push_back({{start, cut}, current});
      if (static_cast<int>(pieces.size()) >= options.max_pieces) {
        fail(ErrorCode::PartitionOverflow, "sign partition of " + f.name() + " exceeded " +
                                               std::to_string(options.max_pieces) + " pieces");
      }
      start = cut;
      current = s;
    }
    last_x = xs[i];
  }
  pieces.push_back({{start, window.hi}, current});
  return pieces;
}

std::vector<Interval> split_by_orders(const PhaseFunction& f, std::span<const int> orders,
                                      Interval window, const PartitionOptions& options) {
  std::vector<double> cuts;
  for (int k : orders) {
    const auto pieces = sign_partition(f, k, window, options);
    for (std::size_t i = 1; i < pieces.size(); ++i) cuts.push_back(pieces[i].interval.lo);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> out;
  double start = window.lo;
  for (double c : cuts) {
    if (c - start <= options.tol) continue;
    if (window.hi - c <= options.tol) break;
    out.push_back({start, c});
    start = c;
  }
  out.push_back({start, window.hi});
  if (static_cast<int>(out.size()) > options.max_pieces) {
    fail(ErrorCode::PartitionOverflow, "monotone partition of " + f.name() + " exceeded " +
                                           std::to_string(options.max_pieces) + " pieces");
  }
  return out;
}

std::vector<Interval> monotone_partition(const PhaseFunction& f, const PartitionOptions& options) {
  const int N = f.meta().N;
  require(f.max_order() >= N, ErrorCode::InvalidArgument,
          "monotone partition needs derivatives through order N");
  std::vector<int> orders;
  for (int k = 1; k <= N; ++k) orders.push_back(k);
  return split_by_orders(f, orders, f.domain(), options);
}

}  // namespace oscint
