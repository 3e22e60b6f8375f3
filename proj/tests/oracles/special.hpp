#pragma once

// Reference special functions for the quadrature tests. They are written
// independently of the library (power series below a switch point, complex
// continued fractions above it) so agreement is a genuine cross-check.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

// Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2), S(x) likewise with sin.
inline void fresnel(double x, double& c, double& s) {
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double pi = std::numbers::pi;
  const double ax = std::abs(x);
  if (ax < 1e-150) {
    c = ax;
    s = 0.0;
  } else if (ax <= 1.5) {
    double sum = 0.0, sums = 0.0, sumc = ax, sign = 1.0, term = ax;
    const double fact = 0.5 * pi * ax * ax;
    bool odd = true;
    int n = 3;
    for (int k = 1; k < 200; ++k) {
      term *= fact / k;
      sum += sign * term / n;
      const double test = std::abs(sum) * kEps;
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (term < test) break;
      odd = !odd;
      n += 2;
    }
    s = sums;
    c = sumc;
  } else {
    const double pix2 = pi * ax * ax;
    std::complex<double> b(1.0, -pix2);
    std::complex<double> cc = 1.0 / kTiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    int n = -1;
    for (int k = 2; k < 400; ++k) {
      n += 2;
      const double a = -static_cast<double>(n) * (n + 1);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const std::complex<double> del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= std::complex<double>(ax, -ax);
    const std::complex<double> cs =
        std::complex<double>(0.5, 0.5) * (1.0 - std::complex<double>(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    c = cs.real();
    s = cs.imag();
  }
  if (x < 0) {
    c = -c;
    s = -s;
  }
}

// int_0^1 exp(i lam x^2) dx for lam > 0.
inline std::complex<double> quadratic_phase_integral(double lam) {
  const double z = std::sqrt(2.0 * lam / std::numbers::pi);
  double c, s;
  fresnel(z, c, s);
  return std::sqrt(std::numbers::pi / (2.0 * lam)) * std::complex<double>(c, s);
}

// int_0^1 exp(i lam x) dx.
inline std::complex<double> linear_phase_integral(double lam) {
  if (lam == 0.0) return 1.0;
  const std::complex<double> i(0.0, 1.0);
  return (std::exp(i * lam) - 1.0) / (i * lam);
}

// Sine and cosine integrals Si(x), Ci(x) for x > 0.
inline void sici(double x, double& si, double& ci) {
  constexpr double kEps = 1e-16;
  constexpr double kEuler = 0.577215664901532860606512090082;
  constexpr double kTiny = 1e-300;
  if (x <= 2.0) {
    double sum = 0.0, sums = 0.0, sumc = 0.0, sign = 1.0, fact = 1.0;
    bool odd = true;
    for (int k = 1; k < 200; ++k) {
      fact *= x / k;
      const double term = fact / k;
      sum += sign * term;
      const double err = term / std::abs(sum);
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (err < kEps) break;
      odd = !odd;
    }
    si = sums;
    ci = sumc + std::log(x) + kEuler;
    return;
  }
  std::complex<double> b(1.0, x);
  std::complex<double> c = 1.0 / kTiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 2; i < 400; ++i) {
    const double a = -static_cast<double>(i - 1) * (i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h = std::complex<double>(std::cos(x), -std::sin(x)) * h;
  ci = -h.real();
  si = std::numbers::pi / 2 + h.imag();
}

// int_0^1 int_0^1 exp(i lam x y) dx dy = (Si(lam) + i Cin(lam)) / lam,
// Cin(lam) = gamma + ln(lam) - Ci(lam).
inline std::complex<double> bilinear_phase_integral(double lam) {
  constexpr double kEuler = 0.577215664901532860606512090082;
  double si, ci;
  sici(lam, si, ci);
  const double cin = kEuler + std::log(lam) - ci;
  return std::complex<double>(si, cin) / lam;
}

}  // namespace oracle
