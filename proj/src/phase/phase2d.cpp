#include <algorithm>
#include <cmath>

#include "oscint/error.hpp"
#include "oscint/phase.hpp"

namespace oscint {

namespace {

std::vector<double> critical_lines(std::vector<double> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<double> lines = edges;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) lines.push_back(0.5 * (edges[i] + edges[i + 1]));
  std::sort(lines.begin(), lines.end());
  return lines;
}

}  // namespace

PlanarDomain::PlanarDomain(std::vector<Rect> pieces, int slice_bound)
    : pieces_(std::move(pieces)), slice_bound_(slice_bound) {
  require(!pieces_.empty(), ErrorCode::InvalidArgument, "planar domain needs at least one rectangle");
  require(slice_bound_ >= 1, ErrorCode::InvalidArgument, "slice bound must be >= 1");
  bbox_ = pieces_.front();
  for (const auto& r : pieces_) {
    require(std::isfinite(r.x.lo) && std::isfinite(r.x.hi) && std::isfinite(r.y.lo) &&
                std::isfinite(r.y.hi) && r.x.lo < r.x.hi && r.y.lo < r.y.hi,
            ErrorCode::InvalidArgument, "rectangles must be finite with positive side lengths");
    bbox_.x.lo = std::min(bbox_.x.lo, r.x.lo);
    bbox_.x.hi = std::max(bbox_.x.hi, r.x.hi);
    bbox_.y.lo = std::min(bbox_.y.lo, r.y.lo);
    bbox_.y.hi = std::max(bbox_.y.hi, r.y.hi);
  }
  // slice_y/slice_x throw when a line meets too many intervals.
  for (double x : critical_lines(x_breaks())) (void)slice_y(x);
  for (double y : critical_lines(y_breaks())) (void)slice_x(y);
}

double PlanarDomain::area() const {
  const auto xs = x_breaks();
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    a += (xs[i + 1] - xs[i]) * total_length(slice_y(0.5 * (xs[i] + xs[i + 1])));
  }
  return a;
}

double PlanarDomain::diameter() const { return std::hypot(bbox_.x.length(), bbox_.y.length()); }

std::vector<Interval> PlanarDomain::slice_y(double x) const {
  std::vector<Interval> ys;
  for (const auto& r : pieces_) {
    if (r.x.contains(x)) ys.push_back(r.y);
  }
  auto merged = merge_intervals(std::move(ys));
  if (static_cast<int>(merged.size()) > slice_bound_) {
    fail(ErrorCode::SliceOverflow, "vertical slice meets " + std::to_string(merged.size()) +
                                       " intervals, above the slice bound " + std::to_string(slice_bound_));
  }
  return merged;
}

std::vector<Interval> PlanarDomain::slice_x(double y) const {
  std::vector<Interval> xs;
  for (const auto& r : pieces_) {
    if (r.y.contains(y)) xs.push_back(r.x);
  }
  auto merged = merge_intervals(std::move(xs));
  if (static_cast<int>(merged.size()) > slice_bound_) {
    fail(ErrorCode::SliceOverflow, "horizontal slice meets " + std::to_string(merged.size()) +
                                       " intervals, above the slice bound " + std::to_string(slice_bound_));
  }
  return merged;
}

std::vector<double> PlanarDomain::x_breaks() const {
  std::vector<double> v;
  for (const auto& r : pieces_) {
    v.push_back(r.x.lo);
    v.push_back(r.x.hi);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> PlanarDomain::y_breaks() const {
  std::vector<double> v;
  for (const auto& r : pieces_) {
    v.push_back(r.y.lo);
    v.push_back(r.y.hi);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool PlanarDomain::contains(const PlanarDomain& other) const {
  auto edges = x_breaks();
  const auto more = other.x_breaks();
  edges.insert(edges.end(), more.begin(), more.end());
  for (double x : critical_lines(edges)) {
    const auto mine = slice_y(x);
    for (const auto& piece : other.slice_y(x)) {
      bool inside = false;
      for (const auto& m : mine) inside = inside || m.contains(piece);
      if (!inside) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

class SliceModel final : public PhaseModel {
 public:
  SliceModel(std::shared_ptr<const Phase2DModel> m, double fixed, bool along_y)
      : m_(std::move(m)), fixed_(fixed), along_y_(along_y) {}
  double eval(int order, double t) const override {
    return along_y_ ? m_->eval(0, order, fixed_, t) : m_->eval(order, 0, t, fixed_);
  }

 private:
  std::shared_ptr<const Phase2DModel> m_;
  double fixed_;
  bool along_y_;
};

class ScaledModel final : public PhaseModel {
 public:
  ScaledModel(PhaseFunction f, double a) : f_(std::move(f)), a_(a) {}
  double eval(int order, double x) const override { return a_ * f_.eval(order, x); }
  void eval_batch(int order, std::span<const double> xs, std::span<double> out) const override {
    f_.eval_batch(order, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] *= a_;
  }

 private:
  PhaseFunction f_;
  double a_;
};

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

class BipolyModel final : public Phase2DModel {
 public:
  explicit BipolyModel(std::vector<std::vector<double>> c) : c_(std::move(c)) {}

  double eval(int ox, int oy, double x, double y) const override {
    double total = 0.0;
    for (std::size_t i = c_.size(); i-- > static_cast<std::size_t>(ox);) {
      double row = 0.0;
      for (std::size_t j = c_[i].size(); j-- > static_cast<std::size_t>(oy);) {
        row = row * y + c_[i][j] * falling(static_cast<int>(j), oy);
      }
      total = total * x + row * falling(static_cast<int>(i), ox);
    }
    return total;
  }

  std::optional<PhaseFunction> slice_y(double x, Interval ys) const override {
    std::size_t width = 0;
    for (const auto& row : c_) width = std::max(width, row.size());
    std::vector<double> b(width, 0.0);
    double xp = 1.0;
    for (const auto& row : c_) {
      for (std::size_t j = 0; j < row.size(); ++j) b[j] += row[j] * xp;
      xp *= x;
    }
    return poly_slice(std::move(b), ys);
  }

  std::optional<PhaseFunction> slice_x(double y, Interval xs) const override {
    std::vector<double> b(c_.size(), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      double yp = 1.0;
      for (double cij : c_[i]) {
        b[i] += cij * yp;
        yp *= y;
      }
    }
    return poly_slice(std::move(b), xs);
  }

 private:
  static PhaseFunction poly_slice(std::vector<double> b, Interval dom) {
    while (b.size() > 1 && b.back() == 0.0) b.pop_back();
    if (b.size() == 1 && b[0] == 0.0) {
      return closure_phase([](int, double) { return 0.0; }, 32, dom, PhaseMeta{}, "0");
    }
    return polynomial_phase(Polynomial(std::move(b)), dom);
  }

  std::vector<std::vector<double>> c_;
};

class ProductModel final : public Phase2DModel {
 public:
  ProductModel(PhaseFunction f, PhaseFunction g) : f_(std::move(f)), g_(std::move(g)) {}
  double eval(int ox, int oy, double x, double y) const override {
    return f_.eval(ox, x) * g_.eval(oy, y);
  }
  std::optional<PhaseFunction> slice_y(double x, Interval ys) const override {
    return PhaseFunction(std::make_shared<ScaledModel>(g_, f_(x)), g_.max_order(), ys, PhaseMeta{},
                         "c*" + g_.name());
  }
  std::optional<PhaseFunction> slice_x(double y, Interval xs) const override {
    return PhaseFunction(std::make_shared<ScaledModel>(f_, g_(y)), f_.max_order(), xs, PhaseMeta{},
                         "c*" + f_.name());
  }

 private:
  PhaseFunction f_;
  PhaseFunction g_;
};

class Composed2DModel final : public Phase2DModel {
 public:
  Composed2DModel(const Polynomial& P, Phase2D f) : P_(P), f_(std::move(f)) {
    if (P.degree() >= 1) dP_ = derivative(P);
    if (P.degree() >= 2) d2P_ = derivative(*dP_);
  }

  double eval(int ox, int oy, double x, double y) const override {
    require(ox + oy <= 2, ErrorCode::InvalidArgument, "composed 2D phase supports total order <= 2");
    const double u = f_(x, y);
    if (ox + oy == 0) return P_(u);
    const double p1 = dP_ ? (*dP_)(u) : 0.0;
    if (ox + oy == 1) return p1 * f_.eval(ox, oy, x, y);
    const double p2 = d2P_ ? (*d2P_)(u) : 0.0;
    if (ox == 1 && oy == 1) {
      return p2 * f_.eval(1, 0, x, y) * f_.eval(0, 1, x, y) + p1 * f_.eval(1, 1, x, y);
    }
    const double g1 = f_.eval(ox ? 1 : 0, oy ? 1 : 0, x, y);
    return p2 * g1 * g1 + p1 * f_.eval(ox, oy, x, y);
  }

  std::optional<PhaseFunction> slice_y(double x, Interval ys) const override {
    return composed_phase(P_, f_.slice_y(x, ys));
  }
  std::optional<PhaseFunction> slice_x(double y, Interval xs) const override {
    return composed_phase(P_, f_.slice_x(y, xs));
  }

 private:
  Polynomial P_;
  std::optional<Polynomial> dP_;
  std::optional<Polynomial> d2P_;
  Phase2D f_;
};

}  // namespace

std::optional<PhaseFunction> Phase2DModel::slice_y(double, Interval) const { return std::nullopt; }
std::optional<PhaseFunction> Phase2DModel::slice_x(double, Interval) const { return std::nullopt; }

Phase2D::Phase2D(std::shared_ptr<const Phase2DModel> model, std::array<int, 2> max_orders, Rect domain,
                 std::array<int, 2> beta, std::array<int, 2> N_orders, std::string name)
    : model_(std::move(model)),
      max_orders_(max_orders),
      domain_(domain),
      beta_(beta),
      N_orders_(N_orders),
      name_(std::move(name)) {
  require(model_ != nullptr, ErrorCode::InvalidArgument, "2D phase model is null");
  require(beta_[0] >= 0 && beta_[1] >= 0 && beta_[0] + beta_[1] >= 1, ErrorCode::InvalidArgument,
          "beta components must be >= 0 with |beta| >= 1");
  require(beta_[0] <= max_orders_[0] && beta_[1] <= max_orders_[1], ErrorCode::InvalidArgument,
          "beta exceeds the declared derivative orders");
}

double Phase2D::eval(int ox, int oy, double x, double y) const {
  require(ox >= 0 && oy >= 0 && ox <= max_orders_[0] && oy <= max_orders_[1],
          ErrorCode::InvalidArgument, "derivative order exceeds the 2D phase's max orders");
  return model_->eval(ox, oy, x, y);
}

PhaseFunction Phase2D::slice_y(double x, Interval ys) const {
  PhaseMeta m;
  m.N = std::max(1, std::min(N_orders_[1], max_orders_[1]));
  if (auto s = model_->slice_y(x, ys)) return s->with_meta(m);
  return PhaseFunction(std::make_shared<SliceModel>(model_, x, true), max_orders_[1], ys, m, name_ + "|x");
}

PhaseFunction Phase2D::slice_x(double y, Interval xs) const {
  PhaseMeta m;
  m.N = std::max(1, std::min(N_orders_[0], max_orders_[0]));
  if (auto s = model_->slice_x(y, xs)) return s->with_meta(m);
  return PhaseFunction(std::make_shared<SliceModel>(model_, y, false), max_orders_[0], xs, m, name_ + "|y");
}

Phase2D Phase2D::with_beta(std::array<int, 2> beta) const {
  return Phase2D(model_, max_orders_, domain_, beta, N_orders_, name_);
}

Phase2D bipoly_phase(std::vector<std::vector<double>> c, Rect domain, std::array<int, 2> beta) {
  require(!c.empty(), ErrorCode::InvalidArgument, "bipoly needs coefficients");
  return Phase2D(std::make_shared<BipolyModel>(std::move(c)), {32, 32}, domain, beta,
                 {std::max(1, beta[0]), std::max(1, beta[1])}, "bipoly");
}

Phase2D product_phase(const PhaseFunction& f, const PhaseFunction& g, std::array<int, 2> beta) {
  return Phase2D(std::make_shared<ProductModel>(f, g), {f.max_order(), g.max_order()},
                 Rect{f.domain(), g.domain()}, beta, {f.meta().N, g.meta().N},
                 f.name() + "*" + g.name());
}

Phase2D composed_phase_2d(const Polynomial& P, const Phase2D& f) {
  const auto mo = f.max_orders();
  return Phase2D(std::make_shared<Composed2DModel>(P, f), {std::min(2, mo[0]), std::min(2, mo[1])},
                 f.domain(), f.beta(), f.N_orders(), "P(" + f.name() + ")");
}

}  // namespace oscint
