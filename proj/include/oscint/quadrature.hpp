#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <vector>

#include "oscint/interval.hpp"
#include "oscint/phase.hpp"

namespace oscint {

struct QuadConfig {
  double rel_tol = 1e-10;
  std::int64_t max_panels = std::int64_t{1} << 20;
  double phase_variation_cap = std::numbers::pi / 2;
  // Sampling density of the monotone-piece scan that seeds the panels.
  double partition_density = 4096.0;

  void validate() const;
};

struct QuadResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::int64_t panels_used = 0;
  double lambda = 0.0;
};

// I(lambda) = int_I exp(i lambda g(x)) dx.
QuadResult osc_integrate_1d(const PhaseFunction& g, double lambda, Interval I, const QuadConfig& cfg = {});

// Iterated integral: outer adaptive Gauss-Kronrod in x over the inner 1D
// oscillatory integral along each vertical slice. Cost grows like lambda^2.
QuadResult osc_integrate_2d(const Phase2D& g, double lambda, const PlanarDomain& X,
                            const QuadConfig& cfg = {});

// Distribution-function route for the same 2D integral:
//   I(lambda) = int exp(i lambda t) dM(t),  M(t) = |{(x, y) in X : g <= t}|.
// M is built once (independent of lambda) as piecewise Chebyshev interpolants,
// so sweeps over lambda cost O(lambda) each. Needs g monotone in y on every
// cell of X; throws Precondition otherwise.
class LevelSetIntegrator {
 public:
  LevelSetIntegrator(const Phase2D& g, const PlanarDomain& X, const QuadConfig& cfg = {});
  ~LevelSetIntegrator();
  LevelSetIntegrator(LevelSetIntegrator&&) noexcept;
  LevelSetIntegrator& operator=(LevelSetIntegrator&&) noexcept;

  QuadResult integrate(double lambda) const;

  // Interpolated and directly computed distribution function.
  double distribution(double t) const;
  double distribution_direct(double t) const;
  Interval value_range() const;
  std::size_t panel_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

QuadResult osc_integrate_2d_levelset(const Phase2D& g, double lambda, const PlanarDomain& X,
                                     const QuadConfig& cfg = {});

// Globally adaptive 15-point Gauss-Kronrod (largest error split first).
// Stops at max(abs_tol, rel_tol |I|), at max_segments, or when every segment
// is at its roundoff floor; `converged` reports which.
struct RealQuadResult {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;
};

RealQuadResult integrate_real(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol = 0.0, int max_segments = 2000);

// Kahan-Babuska (Neumaier) compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace gk15 {
// Nodes in [0, 1) with the center last; the Gauss points are the odd entries.
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss[4] = {0.129484966168869693270611432679082,
                                     0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975,
                                     0.417959183673469387755102040816327};

// The 15 abscissae of [a, b] in the order used by the weight tables below.
void abscissae(double a, double b, double* out15);
// Kronrod and Gauss weights aligned with abscissae().
inline constexpr double kWeightsK[15] = {kKronrod[0], kKronrod[1], kKronrod[2], kKronrod[3], kKronrod[4],
                                         kKronrod[5], kKronrod[6], kKronrod[7], kKronrod[0], kKronrod[1],
                                         kKronrod[2], kKronrod[3], kKronrod[4], kKronrod[5], kKronrod[6]};
inline constexpr double kWeightsG[15] = {0.0, kGauss[0], 0.0, kGauss[1], 0.0, kGauss[2], 0.0, kGauss[3],
                                         0.0, kGauss[0], 0.0, kGauss[1], 0.0, kGauss[2], 0.0};
}  // namespace gk15

}  // namespace oscint
