// Compiled with -mavx2 -mfma on x86-64; the dispatcher only routes here after
// a CPUID check. On other targets the entry points forward to the scalar
// reference so the symbols always exist.

#include "oscint/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define OSCINT_HAVE_AVX2_TU 1
#endif

namespace oscint::kernels::avx2 {

#ifdef OSCINT_HAVE_AVX2_TU

namespace {

// Cody-Waite split of pi/4. The first two parts carry 24 significant bits so
// that y * DP1 and y * DP2 are exact for octant counts below 2^29.
constexpr double kDP1 = 7.85398125648498535156E-1;
constexpr double kDP2 = 3.77489470793079817668E-8;
constexpr double kDP3 = 2.69515142907905952645E-15;
constexpr double kFourOverPi = 1.27323954473516268615;
// Above this magnitude the reduction loses exactness; those lanes go to libm.
constexpr double kReductionLimit = 4.0e8;

constexpr double kSinCoef[6] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                2.75573136213857245213E-6,  -1.98412698295895385996E-4,
                                8.33333333332211858878E-3,  -1.66666666666666307295E-1};
constexpr double kCosCoef[6] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                -2.75573141792967388112E-7,  2.48015872888517045348E-5,
                                -1.38888888888730564116E-3,  4.16666666666665929218E-2};

inline __m256d polevl5(__m256d x, const double (&c)[6]) {
  __m256d acc = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 6; ++k) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[k]));
  return acc;
}

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_mask, x);
  const __m256d x_sign = _mm256_and_pd(x, sign_mask);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  // Round odd octant counts up to the next even one.
  const __m256d half_y = _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.5)));
  const __m256d odd = _mm256_cmp_pd(_mm256_sub_pd(y, _mm256_add_pd(half_y, half_y)),
                                    _mm256_set1_pd(0.5), _CMP_GT_OQ);
  y = _mm256_add_pd(y, _mm256_and_pd(odd, _mm256_set1_pd(1.0)));
  // j = y mod 8, held exactly in double.
  const __m256d eighth = _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125)));
  __m256d j = _mm256_fnmadd_pd(eighth, _mm256_set1_pd(8.0), y);

  const __m256d gt3 = _mm256_cmp_pd(j, _mm256_set1_pd(3.5), _CMP_GT_OQ);
  j = _mm256_sub_pd(j, _mm256_and_pd(gt3, _mm256_set1_pd(4.0)));
  const __m256d gt1 = _mm256_cmp_pd(j, _mm256_set1_pd(1.5), _CMP_GT_OQ);
  // Lanes with j in {1, 2} swap the sine and cosine polynomials.
  const __m256d j_is_1_or_2 = _mm256_and_pd(_mm256_cmp_pd(j, _mm256_set1_pd(0.5), _CMP_GT_OQ),
                                            _mm256_cmp_pd(j, _mm256_set1_pd(2.5), _CMP_LT_OQ));

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl5(zz, kSinCoef), z);
  const __m256d cos_poly =
      _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl5(zz, kCosCoef),
                      _mm256_fnmadd_pd(zz, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

  __m256d s = _mm256_blendv_pd(sin_poly, cos_poly, j_is_1_or_2);
  __m256d c = _mm256_blendv_pd(cos_poly, sin_poly, j_is_1_or_2);

  // sin picks up a sign flip from the octant fold and from the input sign.
  s = _mm256_xor_pd(s, _mm256_and_pd(gt3, sign_mask));
  s = _mm256_xor_pd(s, x_sign);
  // cos flips once for the fold past pi and once more for j > 1.
  c = _mm256_xor_pd(c, _mm256_and_pd(_mm256_xor_pd(gt3, gt1), sign_mask));

  s_out = s;
  c_out = c;
}

}  // namespace

void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
  assert(out.size() >= xs.size());
  const std::size_t n = coeffs.size();
  if (n == 0) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 0.0;
    return;
  }
  std::size_t i = 0;
  for (; i + 8 <= xs.size(); i += 8) {
    const __m256d x0 = _mm256_loadu_pd(xs.data() + i);
    const __m256d x1 = _mm256_loadu_pd(xs.data() + i + 4);
    __m256d a0 = _mm256_set1_pd(coeffs[n - 1]);
    __m256d a1 = a0;
    for (std::size_t k = n - 1; k-- > 0;) {
      const __m256d ck = _mm256_set1_pd(coeffs[k]);
      a0 = _mm256_fmadd_pd(a0, x0, ck);
      a1 = _mm256_fmadd_pd(a1, x1, ck);
    }
    _mm256_storeu_pd(out.data() + i, a0);
    _mm256_storeu_pd(out.data() + i + 4, a1);
  }
  for (; i < xs.size(); ++i) {
    double acc = coeffs[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) acc = std::fma(acc, xs[i], coeffs[k]);
    out[i] = acc;
  }
}

void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out) {
  assert(sin_out.size() >= theta.size() && cos_out.size() >= theta.size());
  const __m256d limit = _mm256_set1_pd(kReductionLimit);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= theta.size(); i += 4) {
    const __m256d x = _mm256_loadu_pd(theta.data() + i);
    const __m256d ax = _mm256_andnot_pd(sign_mask, x);
    // NaN or huge lanes: defer the whole block to libm.
    if (_mm256_movemask_pd(_mm256_cmp_pd(ax, limit, _CMP_LT_OQ)) != 0xF) {
      for (std::size_t k = i; k < i + 4; ++k) {
        sin_out[k] = std::sin(theta[k]);
        cos_out[k] = std::cos(theta[k]);
      }
      continue;
    }
    __m256d s;
    __m256d c;
    sincos4(x, s, c);
    _mm256_storeu_pd(sin_out.data() + i, s);
    _mm256_storeu_pd(cos_out.data() + i, c);
  }
  for (; i < theta.size(); ++i) {
    sin_out[i] = std::sin(theta[i]);
    cos_out[i] = std::cos(theta[i]);
  }
}

void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out) {
  assert(out.size() >= us.size());
  const std::size_t n = cheb.size();
  if (n == 0) {
    for (std::size_t i = 0; i < us.size(); ++i) out[i] = 0.0;
    return;
  }
  std::size_t i = 0;
  for (; i + 4 <= us.size(); i += 4) {
    const __m256d u = _mm256_loadu_pd(us.data() + i);
    const __m256d two_u = _mm256_add_pd(u, u);
    __m256d b1 = _mm256_setzero_pd();
    __m256d b2 = _mm256_setzero_pd();
    for (std::size_t k = n - 1; k >= 1; --k) {
      const __m256d b0 = _mm256_add_pd(_mm256_fmsub_pd(two_u, b1, b2), _mm256_set1_pd(cheb[k]));
      b2 = b1;
      b1 = b0;
    }
    const __m256d r = _mm256_add_pd(_mm256_fmsub_pd(u, b1, b2), _mm256_set1_pd(cheb[0]));
    _mm256_storeu_pd(out.data() + i, r);
  }
  if (i < us.size()) scalar::clenshaw(cheb, us.subspan(i), out.subspan(i));
}

#else

void horner(std::span<const double> coeffs, std::span<const double> xs, std::span<double> out) {
  scalar::horner(coeffs, xs, out);
}
void sincos(std::span<const double> theta, std::span<double> sin_out, std::span<double> cos_out) {
  scalar::sincos(theta, sin_out, cos_out);
}
void clenshaw(std::span<const double> cheb, std::span<const double> us, std::span<double> out) {
  scalar::clenshaw(cheb, us, out);
}

#endif

}  // namespace oscint::kernels::avx2
