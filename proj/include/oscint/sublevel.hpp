#pragma once

#include <span>
#include <string>
#include <vector>

#include "oscint/interval.hpp"
#include "oscint/phase.hpp"

namespace oscint {

// {x in I : |f(x) - c| <= eps} as ordered disjoint intervals.
struct SublevelResult {
  double measure = 0.0;
  std::vector<Interval> components;
  double c = 0.0;
  double epsilon = 0.0;
};

SublevelResult sublevel_1d(const PhaseFunction& f, double c, double eps, Interval I,
                           const PartitionOptions& options = {});

// Area of {(x, y) in X : |f - c| <= eps}: outer adaptive quadrature in x of
// the slice measures.
double sublevel_2d(const Phase2D& f, double c, double eps, const PlanarDomain& X, double rel_tol = 1e-8);

// C_delta = int |phi^(xi)| |xi|^{-delta} dxi for the smoothed-indicator bump
// phi = 1_[-1.5, 1.5] * rho_{1/2}, with rho the standard mollifier on [-1, 1].
struct OscToSublevelConstant {
  double delta = 0.0;
  double C_delta = 0.0;
  std::string bump_spec;
  double cutoff = 0.0;         // Xi: frequencies beyond it are dropped
  double tail_estimate = 0.0;  // relative size of the last dyadic block before the cutoff
};

OscToSublevelConstant osc_to_sublevel_constant(double delta);

namespace bump {
inline constexpr const char* kSpec = "indicator[-1.5,1.5]*mollifier(0.5)";
// Normalized mollifier rho on [-1, 1].
double rho(double u);
double phi(double x);
// phi^(xi) = int phi(x) exp(-2 pi i x xi) dx (real, since phi is even).
double phi_hat(double xi);
}  // namespace bump

// Empirical oscillatory constant: max(1, sup over the grid of |I(lambda)| lambda^delta).
double estimate_oscillatory_constant(const PhaseFunction& f, double delta, Interval I,
                                     std::span<const double> lambdas);

// Geometric grid with `per_decade` points per decade from lo to hi inclusive.
std::vector<double> per_decade_grid(double lo, double hi, int per_decade = 25);

}  // namespace oscint
