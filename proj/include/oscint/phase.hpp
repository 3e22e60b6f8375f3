#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscint/interval.hpp"
#include "oscint/polynomial.hpp"

namespace oscint {

struct PhaseMeta {
  int N = 1;                                     // derivative order of the hypothesis
  std::optional<double> derivative_lower_bound;  // alpha in |f^(N)| >= alpha
  std::optional<double> claimed_delta;
  std::optional<double> claimed_A;
  std::vector<int> single_sign_orders;
};

// Evaluation backend. Implementations must be pure and thread-safe.
class PhaseModel {
 public:
  virtual ~PhaseModel() = default;
  virtual double eval(int order, double x) const = 0;
  virtual void eval_batch(int order, std::span<const double> xs, std::span<double> out) const;
};

// Immutable handle: f and its derivatives up to max_order on a closed interval.
class PhaseFunction {
 public:
  PhaseFunction(std::shared_ptr<const PhaseModel> model, int max_order, Interval domain,
                PhaseMeta meta, std::string name);

  double operator()(double x) const { return model_->eval(0, x); }
  // Throws InvalidArgument when order > max_order.
  double eval(int order, double x) const;
  void eval_batch(int order, std::span<const double> xs, std::span<double> out) const;

  int max_order() const noexcept { return max_order_; }
  const Interval& domain() const noexcept { return domain_; }
  const PhaseMeta& meta() const noexcept { return meta_; }
  const std::string& name() const noexcept { return name_; }
  const std::shared_ptr<const PhaseModel>& model() const noexcept { return model_; }

  PhaseFunction with_domain(Interval domain) const;
  PhaseFunction with_meta(PhaseMeta meta) const;

 private:
  std::shared_ptr<const PhaseModel> model_;
  int max_order_;
  Interval domain_;
  PhaseMeta meta_;
  std::string name_;
};

// Families. Polynomial-backed phases evaluate batches with the SIMD Horner kernel.
PhaseFunction monomial_phase(int n, Interval domain, double coeff = 1.0);
PhaseFunction polynomial_phase(const Polynomial& p, Interval domain);
// base(x) + amp * sin(freq * x + shift); base may be empty.
PhaseFunction sine_phase(std::optional<Polynomial> base, double amp, double freq, double shift,
                         Interval domain);
// base(x) + amp * exp(rate * x).
PhaseFunction exp_phase(std::optional<Polynomial> base, double amp, double rate, Interval domain);

using PhaseClosure = std::function<double(int order, double x)>;
PhaseFunction closure_phase(PhaseClosure fn, int max_order, Interval domain, PhaseMeta meta,
                            std::string name = "closure");

// x -> P(f(x)); derivatives through order min(3, f.max_order()).
PhaseFunction composed_phase(const Polynomial& P, const PhaseFunction& f);
// x -> |f(x)|^s, s > 0; derivatives through order 1 (order 1 needs s >= 1 where f vanishes).
PhaseFunction abs_power_phase(const PhaseFunction& f, double s);

struct SignPiece {
  Interval interval;
  int sign = 0;  // +1, -1, or 0 when the derivative vanishes identically on the piece
};

struct PartitionOptions {
  double tol = 1e-12;
  double samples_per_unit = 4096.0;
  int min_samples = 64;
  int max_pieces = 4096;
};

// Pieces on which eval(order, .) is single-signed (non-strict), left to right.
std::vector<SignPiece> sign_partition(const PhaseFunction& f, int order,
                                      const PartitionOptions& options = {});
std::vector<SignPiece> sign_partition(const PhaseFunction& f, int order, Interval window,
                                      const PartitionOptions& options = {});

// Pieces on which f, f', ..., f^(N-1) are all monotone (N = meta.N).
std::vector<Interval> monotone_partition(const PhaseFunction& f, const PartitionOptions& options = {});
// Same, but only for the listed orders (e.g. {1} for monotone f alone) on a window.
std::vector<Interval> split_by_orders(const PhaseFunction& f, std::span<const int> orders,
                                      Interval window, const PartitionOptions& options = {});

// ---------------------------------------------------------------------------
// Two dimensions.

struct Rect {
  Interval x;
  Interval y;
};

class PlanarDomain {
 public:
  // Checks the slice bound on every critical line; throws SliceOverflow.
  PlanarDomain(std::vector<Rect> pieces, int slice_bound = 1);
  static PlanarDomain rectangle(Interval x, Interval y) { return PlanarDomain({{x, y}}, 1); }

  const std::vector<Rect>& pieces() const noexcept { return pieces_; }
  int slice_bound() const noexcept { return slice_bound_; }
  Rect bounding_box() const noexcept { return bbox_; }
  double area() const;
  double diameter() const;

  // Merged y-intervals of the vertical line at x (x-intervals of the horizontal line at y).
  std::vector<Interval> slice_y(double x) const;
  std::vector<Interval> slice_x(double y) const;
  // Sorted distinct x (resp. y) coordinates of rectangle edges.
  std::vector<double> x_breaks() const;
  std::vector<double> y_breaks() const;
  bool contains(const PlanarDomain& other) const;

 private:
  std::vector<Rect> pieces_;
  int slice_bound_;
  Rect bbox_;
};

class Phase2DModel {
 public:
  virtual ~Phase2DModel() = default;
  virtual double eval(int ox, int oy, double x, double y) const = 0;
  // Specialized slices (e.g. polynomial in y at fixed x). nullopt selects the
  // generic slice, which evaluates through eval().
  virtual std::optional<PhaseFunction> slice_y(double x, Interval ys) const;
  virtual std::optional<PhaseFunction> slice_x(double y, Interval xs) const;
};

class Phase2D {
 public:
  Phase2D(std::shared_ptr<const Phase2DModel> model, std::array<int, 2> max_orders, Rect domain,
          std::array<int, 2> beta, std::array<int, 2> N_orders, std::string name);

  double operator()(double x, double y) const { return model_->eval(0, 0, x, y); }
  double eval(int ox, int oy, double x, double y) const;

  PhaseFunction slice_y(double x, Interval ys) const;
  PhaseFunction slice_x(double y, Interval xs) const;

  std::array<int, 2> max_orders() const noexcept { return max_orders_; }
  const Rect& domain() const noexcept { return domain_; }
  std::array<int, 2> beta() const noexcept { return beta_; }
  std::array<int, 2> N_orders() const noexcept { return N_orders_; }
  const std::string& name() const noexcept { return name_; }
  const std::shared_ptr<const Phase2DModel>& model() const noexcept { return model_; }

  Phase2D with_beta(std::array<int, 2> beta) const;

 private:
  std::shared_ptr<const Phase2DModel> model_;
  std::array<int, 2> max_orders_;
  Rect domain_;
  std::array<int, 2> beta_;
  std::array<int, 2> N_orders_;
  std::string name_;
};

// sum_{i,j} c[i][j] x^i y^j.
Phase2D bipoly_phase(std::vector<std::vector<double>> c, Rect domain, std::array<int, 2> beta);
// f(x) * g(y).
Phase2D product_phase(const PhaseFunction& f, const PhaseFunction& g, std::array<int, 2> beta);
// P(f(x, y)); mixed derivatives of total order <= 2.
Phase2D composed_phase_2d(const Polynomial& P, const Phase2D& f);

}  // namespace oscint
