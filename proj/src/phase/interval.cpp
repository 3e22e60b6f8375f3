#include "oscint/interval.hpp"

#include <cmath>

#include "oscint/error.hpp"

namespace oscint {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "INVALID_ARGUMENT";
    case ErrorCode::Domain:
      return "DOMAIN";
    case ErrorCode::PartitionOverflow:
      return "PARTITION_OVERFLOW";
    case ErrorCode::NoConvergence:
      return "NO_CONVERGENCE";
    case ErrorCode::PanelBudget:
      return "PANEL_BUDGET";
    case ErrorCode::NotSnd:
      return "NOT_SND";
    case ErrorCode::NotMonic:
      return "NOT_MONIC";
    case ErrorCode::NotNormalized:
      return "NOT_NORMALIZED";
    case ErrorCode::Precondition:
      return "PRECONDITION";
    case ErrorCode::NonconvergentTail:
      return "NONCONVERGENT_TAIL";
    case ErrorCode::SliceOverflow:
      return "SLICE_OVERFLOW";
    case ErrorCode::InsufficientSpan:
      return "INSUFFICIENT_SPAN";
    case ErrorCode::NoiseDominated:
      return "NOISE_DOMINATED";
    case ErrorCode::Config:
      return "CONFIG";
  }
  return "UNKNOWN";
}

Interval make_interval(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::InvalidArgument,
          "interval endpoints must be finite");
  require(lo <= hi, ErrorCode::InvalidArgument, "interval requires lo <= hi");
  return Interval{lo, hi};
}

std::vector<Interval> merge_intervals(std::vector<Interval> pieces, double touch_tol) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& p : pieces) {
    if (!out.empty() && p.lo <= out.back().hi + touch_tol) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Interval> clip_intervals(const std::vector<Interval>& pieces, Interval window) {
  std::vector<Interval> out;
  for (const auto& p : pieces) {
    const double lo = std::max(p.lo, window.lo);
    const double hi = std::min(p.hi, window.hi);
    if (lo <= hi) out.push_back({lo, hi});
  }
  return out;
}

std::vector<Interval> complement_in(const std::vector<Interval>& pieces, Interval window) {
  std::vector<Interval> out;
  double cursor = window.lo;
  for (const auto& p : clip_intervals(pieces, window)) {
    if (p.lo > cursor) out.push_back({cursor, p.lo});
    cursor = std::max(cursor, p.hi);
  }
  if (cursor < window.hi) out.push_back({cursor, window.hi});
  return out;
}

double total_length(const std::vector<Interval>& pieces) {
  double s = 0.0;
  for (const auto& p : pieces) s += p.length();
  return s;
}

}  // namespace oscint
