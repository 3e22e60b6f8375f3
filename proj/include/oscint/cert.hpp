#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oscint/interval.hpp"
#include "oscint/phase.hpp"
#include "oscint/polynomial.hpp"
#include "oscint/quadrature.hpp"

namespace oscint {

enum class PieceKind { RemovedSublevel, SmallDerivative, IntegrationByParts, SliceSmallMixed };

const char* to_string(PieceKind kind) noexcept;

struct CertPiece {
  PieceKind kind = PieceKind::RemovedSublevel;
  std::vector<Interval> support;  // 1D pieces
  std::vector<Rect> region;       // 2D pieces
  double bound = 0.0;
  std::string formula;
  double formula_bound = 0.0;  // value of the formula alone (+inf when it does not apply)
  double measured = 0.0;       // measure, or the integration-by-parts bound from measured minima
};

enum class CertMode { General, Vdc };

struct CertificateParams {
  double epsilon = 0.0;
  double r = 0.0;
  std::optional<double> gamma;  // 2D only
  double lambda = 0.0;
  double delta = 0.0;  // general: delta; vdc: 1/N
  double d = 0.0;      // degree of P, or the exponent s of |t|^s
  CertMode mode = CertMode::General;
  int N = 1;
  double A = 1.0;
  double B_cover = 1.0;        // root cover radius factor (1 when P' is monic)
  double sublevel_B = 0.0;     // constant in |{|f - c| <= a}| <= sublevel_B a^delta
  double derivative_lower = 0.0;
};

struct Certificate {
  std::vector<CertPiece> pieces;
  CertificateParams params;
  double total_bound = 0.0;
  std::optional<QuadResult> verified_against;
  int inclusion_violations = 0;  // base intervals where the root cover missed {|P'(f)| <= eps^(d-1)}

  // Sum of the measures of the 1D supports.
  double covered_length() const;
  double bound_of(PieceKind kind) const;
  bool sound() const;  // only meaningful once verified_against is set
};

struct GeneralMode {
  double delta = 0.5;
  double A = 1.0;
};

struct VdcMode {
  int N = 2;
};

using CertifyMode = std::variant<GeneralMode, VdcMode>;

struct CertifyOptions {
  // SND cover factor for P'. Defaults to estimate_B(deg P', 4000, 0), cached per degree.
  std::optional<SndConstant> B;
  // Outer-variable samples per x-strip in 2D.
  int slice_samples = 64;
  int threads = 0;  // 0: default_threads()
};

double derivpush_bound(double B, double delta, double r);
double ibp_bound(double r, double eps, double d, double lambda);

Certificate certify_1d(const PhaseFunction& f, const Polynomial& P, double lambda, const CertifyMode& mode,
                       const CertifyOptions& options = {});
// Same pipeline with the outer transform |t|^s, s > 1, in place of P; s plays the role of d.
Certificate certify_1d_abs_power(const PhaseFunction& f, double s, double lambda, const CertifyMode& mode,
                                 const CertifyOptions& options = {});
// n = 2: x is the outer variable, y the inner one, beta = f.beta().
Certificate certify_2d(const Phase2D& f, const PlanarDomain& X, const Polynomial& P, double lambda,
                       const CertifyOptions& options = {});

// Attaches the quadrature result; returns cert.sound().
bool verify(Certificate& cert, const QuadResult& q);

std::string to_json(const Certificate& cert, int indent = 2);

}  // namespace oscint
