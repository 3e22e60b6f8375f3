#include "oscint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "oscint/error.hpp"
#include "oscint/kernels.hpp"

namespace oscint {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  require(!coeffs_.empty(), ErrorCode::InvalidArgument, "polynomial must have a nonzero coefficient");
  for (double c : coeffs_) {
    require(std::isfinite(c), ErrorCode::InvalidArgument, "polynomial coefficients must be finite");
  }
}

Polynomial Polynomial::monomial(int degree, double coeff) {
  require(degree >= 0, ErrorCode::InvalidArgument, "monomial degree must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double x) const noexcept {
  double acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * x + coeffs_[k];
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const noexcept {
  std::complex<double> acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
  return acc;
}

void Polynomial::eval(std::span<const double> xs, std::span<double> out) const {
  kernels::horner(coeffs_, xs, out);
}

double Polynomial::abs_scale(double x) const noexcept {
  const double ax = std::abs(x);
  double acc = std::abs(coeffs_.back());
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * ax + std::abs(coeffs_[k]);
  return acc;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& p) {
  require(p.degree() >= 1, ErrorCode::InvalidArgument, "derivative requires degree >= 1");
  const auto& a = p.coeffs();
  std::vector<double> d(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) d[k - 1] = static_cast<double>(k) * a[k];
  return Polynomial(std::move(d));
}

std::vector<double> RootSet::real_parts() const {
  std::vector<double> out;
  out.reserve(roots.size());
  for (const auto& z : roots) out.push_back(z.real());
  return out;
}

namespace {

using cd = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void horner_with_derivative(const std::vector<double>& a, cd z, cd& p, cd& dp) {
  p = a.back();
  dp = 0.0;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
}

double abs_scale_at(const std::vector<double>& a, double r) {
  double acc = std::abs(a.back());
  for (std::size_t k = a.size() - 1; k-- > 0;) acc = acc * r + std::abs(a[k]);
  return acc;
}

// Initial points on circles whose radii follow the upper convex hull of
// (k, log|a_k|); this keeps widely separated root magnitudes apart.
std::vector<cd> initial_guesses(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> hull;
  auto logabs = [&](int k) {
    return a[k] == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a[k]));
  };
  for (int k = 0; k <= n; ++k) {
    if (a[k] == 0.0) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2];
      const int j = hull.back();
      // Drop j when it lies on or below the segment from i to k.
      const double cross = (logabs(j) - logabs(i)) * (k - i) - (logabs(k) - logabs(i)) * (j - i);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  std::vector<cd> z;
  z.reserve(n);
  const double sigma = 0.7;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int k0 = hull[h];
    const int k1 = hull[h + 1];
    const int m = k1 - k0;
    const double u = std::pow(std::abs(a[k0]) / std::abs(a[k1]), 1.0 / m);
    for (int j = 0; j < m; ++j) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(j) / m +
                                                     static_cast<double>(k0) / n) +
                           sigma;
      z.push_back(std::polar(u, angle));
    }
  }
  return z;
}

bool aberth(const std::vector<double>& a, std::vector<cd>& z, const RootOptions& opt, int& iterations) {
  const std::size_t n = z.size();
  std::vector<char> done(n, 0);
  for (iterations = 0; iterations < opt.max_iterations; ++iterations) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      cd p;
      cd dp;
      horner_with_derivative(a, z[i], p, dp);
      if (std::abs(p) <= 4.0 * kEps * abs_scale_at(a, std::abs(z[i]))) {
        done[i] = 1;
        continue;
      }
      all_done = false;
      cd s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) s += 1.0 / (z[i] - z[j]);
      }
      cd w;
      if (dp == cd(0.0)) {
        w = cd(1e-3 * (1.0 + std::abs(z[i])), 1e-3);
      } else {
        const cd ratio = p / dp;
        w = ratio / (1.0 - ratio * s);
      }
      z[i] -= w;
      if (std::abs(w) <= opt.tol * std::max(1e-300, std::abs(z[i]))) done[i] = 1;
    }
    if (all_done) return true;
  }
  return std::all_of(done.begin(), done.end(), [](char d) { return d != 0; });
}

bool companion_roots(const std::vector<double>& a, std::vector<cd>& out) {
  const int n = static_cast<int>(a.size()) - 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int col = 0; col < n; ++col) c(0, col) = -a[n - 1 - col] / a[n];
  for (int r = 1; r < n; ++r) c(r, r - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, false);
  if (solver.info() != Eigen::Success) return false;
  out.assign(static_cast<std::size_t>(n), cd(0.0));
  for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()[i];
  return true;
}

void newton_polish(const std::vector<double>& a, std::vector<cd>& z) {
  for (auto& zi : z) {
    for (int it = 0; it < 4; ++it) {
      cd p;
      cd dp;
      horner_with_derivative(a, zi, p, dp);
      if (dp == cd(0.0) || std::abs(p) <= kEps * abs_scale_at(a, std::abs(zi))) break;
      const cd step = p / dp;
      zi -= step;
      if (std::abs(step) <= kEps * std::abs(zi)) break;
    }
  }
}

// Pairs each upper-half-plane root with the closest lower-half-plane root
// and symmetrizes the pair; leftovers are made real.
std::vector<cd> pair_conjugates(std::vector<cd> z) {
  std::vector<cd> out;
  std::vector<char> used(z.size(), 0);
  std::vector<std::size_t> order(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(z[a].imag()) > std::abs(z[b].imag());
  });
  for (std::size_t oi : order) {
    if (used[oi]) continue;
    used[oi] = 1;
    const cd zi = z[oi];
    std::size_t best = z.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z[j] - std::conj(zi));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    const double pair_tol = 1e-6 * (1.0 + std::abs(zi));
    if (best < z.size() && best_d <= std::max(pair_tol, 2.0 * std::abs(zi.imag()) * 1e-6) &&
        std::abs(zi.imag()) > 0.0) {
      used[best] = 1;
      const cd avg = 0.5 * (zi + std::conj(z[best]));
      const cd upper(avg.real(), std::abs(avg.imag()));
      out.push_back(upper);
      out.push_back(std::conj(upper));
    } else {
      out.emplace_back(zi.real(), 0.0);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const cd& a, const cd& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
  });
  return out;
}

bool residuals_ok(const std::vector<double>& a, const std::vector<cd>& z, double residual_tol) {
  double amax = 0.0;
  for (double c : a) amax = std::max(amax, std::abs(c));
  for (const auto& zi : z) {
    cd p;
    cd dp;
    horner_with_derivative(a, zi, p, dp);
    if (!(std::abs(p) <= residual_tol * (1.0 + amax))) return false;
  }
  return true;
}

}  // namespace

RootSet roots(const Polynomial& p, const RootOptions& options) {
  require(p.degree() >= 1, ErrorCode::InvalidArgument, "roots requires degree >= 1");
  require(options.tol > 0.0, ErrorCode::InvalidArgument, "root tolerance must be positive");
  const auto& full = p.coeffs();

  RootSet result;
  // Exact zero roots are split off before iterating.
  std::size_t zeros = 0;
  while (full[zeros] == 0.0) ++zeros;
  std::vector<double> a(full.begin() + static_cast<std::ptrdiff_t>(zeros), full.end());
  std::vector<cd> z(zeros, cd(0.0));

  const int n = static_cast<int>(a.size()) - 1;
  std::vector<cd> found;
  if (n == 1) {
    found.emplace_back(-a[0] / a[1], 0.0);
  } else if (n == 2) {
    const double disc = a[1] * a[1] - 4.0 * a[2] * a[0];
    if (disc >= 0.0) {
      const double q = -0.5 * (a[1] + std::copysign(std::sqrt(disc), a[1]));
      const double r1 = q / a[2];
      const double r2 = q != 0.0 ? a[0] / q : 0.0;
      found.emplace_back(r1, 0.0);
      found.emplace_back(r2, 0.0);
    } else {
      const double re = -a[1] / (2.0 * a[2]);
      const double im = std::sqrt(-disc) / (2.0 * std::abs(a[2]));
      found.emplace_back(re, im);
      found.emplace_back(re, -im);
    }
  } else if (n > 2) {
    bool ok = false;
    if (!options.force_companion) {
      found = initial_guesses(a);
      ok = aberth(a, found, options, result.iterations);
    }
    if (!ok) {
      result.used_companion = true;
      ok = companion_roots(a, found);
      if (ok) newton_polish(a, found);
    }
    if (!ok) fail(ErrorCode::NoConvergence, "root iteration did not converge");
  }
  if (n >= 1) found = pair_conjugates(found);
  z.insert(z.end(), found.begin(), found.end());
  z = pair_conjugates(z);

  // The achievable residual is set by rounding at each root's magnitude.
  double amax = p.max_abs_coeff();
  double floor_tol = options.tol;
  for (const auto& zi : z) {
    floor_tol = std::max(floor_tol, 64.0 * kEps * p.abs_scale(std::abs(zi)) / (1.0 + amax));
  }
  result.residual_tol = floor_tol;
  if (!residuals_ok(full, z, result.residual_tol)) {
    if (!result.used_companion && n > 2) {
      RootOptions retry = options;
      retry.force_companion = true;
      return roots(p, retry);
    }
    fail(ErrorCode::NoConvergence, "root residuals exceed tolerance");
  }
  result.roots = std::move(z);
  return result;
}

Classification classify(const Polynomial& p) {
  Classification c;
  const auto& a = p.coeffs();
  const int d = p.degree();
  c.max_abs_coeff = p.max_abs_coeff();
  c.rescale = 1.0 / c.max_abs_coeff;
  c.monic = std::abs(a[d] - 1.0) <= kClassifyTol;
  for (int j = 0; j <= d; ++j) {
    if (std::abs(a[d - j]) >= c.max_abs_coeff * (1.0 - kClassifyTol)) {
      c.attaining_j = j;
      break;
    }
  }
  const bool unit_max = std::abs(c.max_abs_coeff - 1.0) <= kClassifyTol;
  c.snd = unit_max && c.attaining_j && 2 * *c.attaining_j <= d;
  c.kind = c.monic ? PolyClass::Monic : (c.snd ? PolyClass::Snd : PolyClass::Other);

  char buf[256];
  const int j = c.attaining_j.value_or(-1);
  if (c.kind == PolyClass::Other) {
    std::snprintf(buf, sizeof buf,
                  "other: max |a_{d-j}| = %.6g attained at j=%d (SND needs j <= %g); multiply by "
                  "%.6g to make the max coefficient 1",
                  c.max_abs_coeff, j, d / 2.0, c.rescale);
  } else {
    std::snprintf(buf, sizeof buf, "%s%s: max |a_{d-j}| = %.6g attained at j=%d",
                  c.monic ? "monic" : "SND", (c.monic && c.snd) ? " and SND" : "", c.max_abs_coeff,
                  j);
  }
  c.report = buf;
  return c;
}

YoungCover young_cover(std::span<const SublevelFactor> factors, double eps) {
  require(!factors.empty(), ErrorCode::InvalidArgument, "young_cover needs at least one factor");
  require(eps > 0.0, ErrorCode::InvalidArgument, "young_cover requires eps > 0");
  double inv_sum = 0.0;
  for (const auto& f : factors) {
    require(f.delta > 0.0 && f.delta <= 1.0, ErrorCode::InvalidArgument,
            "factor exponents must lie in (0, 1]");
    require(f.C > 0.0, ErrorCode::InvalidArgument, "factor constants must be positive");
    inv_sum += 1.0 / f.delta;
  }
  const double k = static_cast<double>(factors.size());
  YoungCover out;
  out.delta = 1.0 / inv_sum;
  for (const auto& f : factors) {
    const double p = f.delta / out.delta;
    out.exponents.push_back(p);
    out.thresholds.push_back(std::pow(k * eps / p, 1.0 / p));
    out.C += f.C * std::pow(k * out.delta / f.delta, out.delta);
  }
  return out;
}

bool RootCover::contains(double x, double slack) const noexcept {
  for (double c : centers) {
    if (std::abs(x - c) <= radius + slack) return true;
  }
  return false;
}

std::vector<Interval> RootCover::merged() const { return merge_intervals(intervals); }

namespace {

RootCover cover_from_roots(const Polynomial& p, double radius) {
  RootCover cover;
  cover.radius = radius;
  cover.centers = roots(p).real_parts();
  std::sort(cover.centers.begin(), cover.centers.end());
  for (double c : cover.centers) cover.intervals.push_back({c - radius, c + radius});
  return cover;
}

}  // namespace

RootCover monic_sublevel_cover(const Polynomial& p, double eps) {
  require(eps > 0.0, ErrorCode::InvalidArgument, "cover radius must be positive");
  require(p.degree() >= 1, ErrorCode::InvalidArgument, "cover needs degree >= 1");
  require(classify(p).monic, ErrorCode::NotMonic, "monic_sublevel_cover requires a monic polynomial");
  return cover_from_roots(p, eps);
}

RootCover snd_sublevel_cover(const Polynomial& p, double eps, const SndConstant& B) {
  require(eps > 0.0 && eps <= 1.0, ErrorCode::InvalidArgument, "SND cover requires 0 < eps <= 1");
  require(B.B >= 1.0, ErrorCode::InvalidArgument, "SND constant must be >= 1");
  require(p.degree() >= 1, ErrorCode::InvalidArgument, "cover needs degree >= 1");
  require(classify(p).snd, ErrorCode::NotSnd, "snd_sublevel_cover requires an SND polynomial");
  RootCover cover = cover_from_roots(p, B.B * eps);
  cover.boundary_epsilon = (eps == 1.0);
  return cover;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  require(lo > 0.0 && hi >= lo && count >= 1, ErrorCode::InvalidArgument, "bad geometric grid");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * i / (count - 1));
  g.back() = hi;
  return g;
}

CoverFactor required_cover_factor(const Polynomial& p, std::span<const double> eps_grid) {
  const int d = p.degree();
  require(d >= 1, ErrorCode::InvalidArgument, "cover factor needs degree >= 1");
  std::vector<double> centers = roots(p).real_parts();
  std::sort(centers.begin(), centers.end());
  auto dist = [&](double x) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : centers) best = std::min(best, std::abs(x - c));
    return best;
  };

  CoverFactor out;
  for (double eps : eps_grid) {
    const double level = std::pow(eps, d);
    std::vector<double> candidates;
    for (double sign : {1.0, -1.0}) {
      std::vector<double> shifted = p.coeffs();
      shifted[0] -= sign * level;
      bool all_zero = true;
      for (double v : shifted) all_zero = all_zero && v == 0.0;
      if (all_zero) continue;
      Polynomial q(std::move(shifted));
      if (q.degree() < 1) continue;
      for (const auto& z : roots(q).roots) {
        if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z))) candidates.push_back(z.real());
      }
    }
    // Distance to the centres peaks at sublevel endpoints or halfway between centres.
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
      candidates.push_back(0.5 * (centers[i] + centers[i + 1]));
    }
    for (double x : candidates) {
      const double slack = 1e-6 * level + 64.0 * kEps * p.abs_scale(x);
      if (std::abs(p(x)) > level + slack) continue;
      const double ratio = dist(x) / eps;
      if (ratio > out.factor) {
        out.factor = ratio;
        out.witness_x = x;
        out.witness_eps = eps;
      }
    }
  }
  return out;
}

Polynomial sample_snd(int d, std::uint64_t seed) {
  require(d >= 1, ErrorCode::InvalidArgument, "sample_snd needs d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(d) + 1);
  for (;;) {
    for (double& v : a) v = unit(rng);
    double m = 0.0;
    int jstar = 0;
    for (int j = 0; j <= d; ++j) {
      if (std::abs(a[d - j]) > m) {
        m = std::abs(a[d - j]);
        jstar = j;
      }
    }
    if (2 * jstar > d || m == 0.0) continue;
    for (double& v : a) v /= m;
    // Pin the attained maximum to exactly +-1.
    a[d - jstar] = std::copysign(1.0, a[d - jstar]);
    if (a[d] == 0.0) continue;
    return Polynomial(a);
  }
}

namespace {

double ceil_two_significant(double r) {
  // Ratios that equal 1 up to rounding should report 1, not 1.1.
  r *= 1.0 - 1e-9;
  if (r <= 1.0) return 1.0;
  const double scale = std::pow(10.0, 1.0 - std::floor(std::log10(r)));
  return std::ceil(r * scale) / scale;
}

}  // namespace

SndConstant estimate_B(int d, int trials, std::uint64_t seed, const EstimateBOptions& options) {
  require(d >= 1, ErrorCode::InvalidArgument, "estimate_B needs d >= 1");
  require(trials >= 1, ErrorCode::InvalidArgument, "estimate_B needs at least one trial");
  const std::vector<double> grid =
      options.eps_grid.empty() ? geometric_grid(1e-3, 1.0, 61) : options.eps_grid;
  for (double e : grid) {
    require(e > 0.0 && e <= 1.0, ErrorCode::InvalidArgument, "eps grid must lie in (0, 1]");
  }
  const int threads = std::max(1, std::min(options.threads, trials));
  std::vector<double> worst(static_cast<std::size_t>(threads), 1.0);
  auto work = [&](int t) {
    for (int i = t; i < trials; i += threads) {
      const Polynomial p = sample_snd(d, derive_seed(seed, static_cast<std::uint64_t>(i)));
      worst[t] = std::max(worst[t], required_cover_factor(p, grid).factor);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return SndConstant{d, ceil_two_significant(*std::max_element(worst.begin(), worst.end())),
                     Provenance::Empirical};
}

Polynomial degenerating_family(int k, double eta) {
  require(k >= 1, ErrorCode::InvalidArgument, "degenerating family needs k >= 1");
  require(eta > 0.0, ErrorCode::InvalidArgument, "degenerating family needs eta > 0");
  const double s = std::pow(eta, -1.0 / k);
  Polynomial p({eta});
  const Polynomial factor({-s, 1.0});
  for (int i = 0; i < k; ++i) p = p * factor;
  std::vector<double> c(static_cast<std::size_t>(k - 1), 0.0);
  c.insert(c.end(), p.coeffs().begin(), p.coeffs().end());
  return Polynomial(std::move(c));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace oscint
