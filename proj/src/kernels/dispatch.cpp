#include <atomic>
#include <cstdlib>
#include <string_view>

#include "oscint/kernels.hpp"

namespace oscint::kernels {

namespace {

struct Table {
  void (*horner)(std::span<const double>, std::span<const double>, std::span<double>);
  void (*sincos)(std::span<const double>, std::span<double>, std::span<double>);
  void (*clenshaw)(std::span<const double>, std::span<const double>, std::span<double>);
};

constexpr Table kScalar{&scalar::horner, &scalar::sincos, &scalar::clenshaw};
constexpr Table kAvx2{&avx2::horner, &avx2::sincos, &avx2::clenshaw};

bool cpu_has_avx2() noexcept {
#if defined(OSCINT_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__)) && \
    (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("OSCINT_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const Table*>& table_slot() noexcept {
  static std::atomic<const Table*> slot{initial_isa() == Isa::Avx2 ? &kAvx2 : &kScalar};
  return slot;
}

const Table& table() noexcept { return *table_slot().load(std::memory_order_acquire); }

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() noexcept { return &table() == &kAvx2 ? Isa::Avx2 : Isa::Scalar; }

Isa select_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) isa = Isa::Scalar;
  table_slot().store(isa == Isa::Avx2 ? &kAvx2 : &kScalar, std::memory_order_release);
  return isa;
}

void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
  table().horner(coeffs, xs, out);
}

void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out) {
  table().sincos(theta, sin_out, cos_out);
}

void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out) {
  table().clenshaw(cheb, us, out);
}

}  // namespace oscint::kernels
