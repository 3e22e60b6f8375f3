#pragma once

// Data-parallel inner loops shared by the quadrature, sublevel and
// polynomial code. Each kernel has a portable scalar reference in
// `kernels::scalar` and an AVX2/FMA variant in `kernels::avx2`; the
// unqualified entry points dispatch at runtime to the best variant the CPU
// supports. Set OSCINT_SIMD=scalar to force the reference path.

#include <span>
#include <string_view>

namespace oscint::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

// Currently selected variant. Selection happens once on first use.
Isa active_isa() noexcept;

// Overrides the selection (tests use this to run both paths). Requesting an
// unsupported ISA falls back to Scalar. Returns the ISA actually selected.
Isa select_isa(Isa isa) noexcept;

// out[i] = sum_k coeffs[k] * xs[i]^k (coefficients in ascending order).
void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);

// sin_out[i] = sin(theta[i]), cos_out[i] = cos(theta[i]).
void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out);

// out[i] = sum_k cheb[k] * T_k(us[i]) for us[i] in [-1, 1].
void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out);

namespace scalar {
void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);
void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out);
void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out);
}  // namespace scalar

namespace avx2 {
// Only callable when isa_supported(Isa::Avx2).
void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out);
void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out);
void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out);
}  // namespace avx2

}  // namespace oscint::kernels
