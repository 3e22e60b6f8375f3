#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscint/interval.hpp"

namespace oscint {

// Real polynomial a_0 + a_1 x + ... + a_d x^d with a_d != 0. Coefficients are
// stored in ascending order, which is also the serialized form.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  // Trailing zero coefficients are dropped; an all-zero input is rejected.
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial monomial(int degree, double coeff = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double leading() const noexcept { return coeffs_.back(); }
  double max_abs_coeff() const noexcept;

  double operator()(double x) const noexcept;
  std::complex<double> operator()(std::complex<double> z) const noexcept;
  // Batched evaluation through the SIMD Horner kernel.
  void eval(std::span<const double> xs, std::span<double> out) const;

  // Sum_k |a_k| |x|^k, the scale of rounding error when evaluating at x.
  double abs_scale(double x) const noexcept;

  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(double factor) const;

 private:
  std::vector<double> coeffs_;
};

Polynomial derivative(const Polynomial& p);

struct RootOptions {
  double tol = 1e-14;
  int max_iterations = 500;
  // Skip the simultaneous iteration and go straight to the companion matrix.
  bool force_companion = false;
};

struct RootSet {
  std::vector<std::complex<double>> roots;  // conjugate pairs adjacent, sorted by real part
  double residual_tol = 0.0;                // |P(z)| <= residual_tol * (1 + max|a_j|)
  int iterations = 0;
  bool used_companion = false;

  std::vector<double> real_parts() const;
};

// Aberth-Ehrlich iteration with a companion-matrix eigenvalue fallback.
RootSet roots(const Polynomial& p, const RootOptions& options = {});

enum class PolyClass { Monic, Snd, Other };

struct Classification {
  PolyClass kind = PolyClass::Other;  // Monic wins when both hold
  bool monic = false;
  bool snd = false;
  std::optional<int> attaining_j;  // smallest j with |a_{d-j}| = max
  double max_abs_coeff = 0.0;
  double rescale = 1.0;  // multiply coefficients by this to make the max coefficient 1
  std::string report;
};

constexpr double kClassifyTol = 1e-12;

Classification classify(const Polynomial& p);

// Sublevel estimate mu{|f_i| <= eps} <= C_i eps^{delta_i} for one factor.
struct SublevelFactor {
  double C = 1.0;
  double delta = 1.0;
};

struct YoungCover {
  double delta = 0.0;
  double C = 0.0;
  std::vector<double> exponents;   // p_i = delta_i / delta
  std::vector<double> thresholds;  // (k eps / p_i)^{1/p_i}
};

// Product-to-factor sublevel inclusion through Young's inequality.
YoungCover young_cover(std::span<const SublevelFactor> factors, double eps);

// Root-proximity cover: intervals [c - radius, c + radius] around the real
// parts of the roots.
struct RootCover {
  std::vector<double> centers;
  double radius = 0.0;
  std::vector<Interval> intervals;
  bool boundary_epsilon = false;  // eps == 1 was accepted at the edge of validity

  bool contains(double x, double slack = 0.0) const noexcept;
  std::vector<Interval> merged() const;
};

enum class Provenance { Empirical, UserSupplied };

struct SndConstant {
  int d = 1;
  double B = 1.0;
  Provenance provenance = Provenance::UserSupplied;
};

RootCover monic_sublevel_cover(const Polynomial& p, double eps);
RootCover snd_sublevel_cover(const Polynomial& p, double eps, const SndConstant& B);

// Smallest factor B such that {|P| <= eps^d} is inside the B*eps cover, taken
// over every eps in the grid. The witness is where the maximum is attained.
struct CoverFactor {
  double factor = 0.0;
  double witness_x = 0.0;
  double witness_eps = 0.0;
};

CoverFactor required_cover_factor(const Polynomial& p, std::span<const double> eps_grid);

// Geometric grid of `count` points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

struct EstimateBOptions {
  std::vector<double> eps_grid;  // empty: 20 points per decade over [1e-3, 1]
  int threads = 1;
};

// Draws uniformly from [-1,1]^{d+1}, rejects until the maximum modulus sits at
// some j <= d/2, then rescales so that maximum is 1.
Polynomial sample_snd(int d, std::uint64_t seed);

SndConstant estimate_B(int d, int trials, std::uint64_t seed, const EstimateBOptions& options = {});

// eta * x^{k-1} * (x - eta^{-1/k})^k, expanded.
Polynomial degenerating_family(int k, double eta);

// Deterministic per-index seed derivation used wherever trials run in parallel.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace oscint
