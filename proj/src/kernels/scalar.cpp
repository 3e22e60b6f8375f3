#include "oscint/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

namespace oscint::kernels::scalar {

void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
  assert(out.size() >= xs.size());
  if (coeffs.empty()) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 0.0;
    return;
  }
  const std::size_t n = coeffs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double acc = coeffs[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) acc = acc * x + coeffs[k];
    out[i] = acc;
  }
}

void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out) {
  assert(sin_out.size() >= theta.size() && cos_out.size() >= theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sin_out[i] = std::sin(theta[i]);
    cos_out[i] = std::cos(theta[i]);
  }
}

void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out) {
  assert(out.size() >= us.size());
  const std::size_t n = cheb.size();
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (n == 0) {
      out[i] = 0.0;
      continue;
    }
    const double u = us[i];
    const double two_u = 2.0 * u;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = n - 1; k >= 1; --k) {
      const double b0 = two_u * b1 - b2 + cheb[k];
      b2 = b1;
      b1 = b0;
    }
    out[i] = u * b1 - b2 + cheb[0];
  }
}

}  // namespace oscint::kernels::scalar
