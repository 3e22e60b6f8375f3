#include "oscint/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscint/error.hpp"
#include "oscint/sublevel.hpp"

namespace oscint {

namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - l.intercept - l.slope * x[i];
    ss_res += e * e;
  }
  // Data on a horizontal line (up to rounding in the mean) is a perfect fit.
  const double flat = 1e-24 * n * (1.0 + my * my);
  l.r_squared = syy > flat ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return l;
}

}  // namespace

DecayFit fit_decay(std::span<const DecaySample> samples) {
  std::vector<double> lx, ly;
  std::size_t noisy = 0;
  DecayFit out;
  out.lambda_min = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    require(s.lambda > 0.0 && s.magnitude >= 0.0 && s.error >= 0.0, ErrorCode::InvalidArgument,
            "decay samples need lambda > 0 and nonnegative magnitude and error");
    if (s.magnitude <= 10.0 * s.error || s.magnitude == 0.0) {
      ++noisy;
      continue;
    }
    lx.push_back(std::log(s.lambda));
    ly.push_back(std::log(s.magnitude));
    out.lambda_min = std::min(out.lambda_min, s.lambda);
    out.lambda_max = std::max(out.lambda_max, s.lambda);
  }
  if (noisy > 0.2 * static_cast<double>(samples.size())) {
    fail(ErrorCode::NoiseDominated, std::to_string(noisy) + " of " + std::to_string(samples.size()) +
                                        " samples have magnitude <= 10 * error");
  }
  if (lx.size() < 8 || out.lambda_max < 100.0 * out.lambda_min) {
    fail(ErrorCode::InsufficientSpan, "decay fit needs >= 8 samples spanning >= 2 decades");
  }
  const Line l = least_squares(lx, ly);
  out.delta_hat = -l.slope;
  out.r_squared = l.r_squared;
  out.used = lx.size();
  for (std::size_t i = 0; i < lx.size(); ++i) {
    out.C_hat = std::max(out.C_hat, std::exp(ly[i] + out.delta_hat * lx[i]));
  }
  return out;
}

LogModelFit fit_log_model(std::span<const std::pair<double, double>> points, double p) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::vector<double> x, y;
  for (const auto& [eps, m] : points) {
    require(eps > 0.0, ErrorCode::InvalidArgument, "log model needs eps > 0");
    lo = std::min(lo, eps);
    hi = std::max(hi, eps);
    x.push_back(std::log(1.0 / eps));
    y.push_back(m / std::pow(eps, p));
  }
  if (points.size() < 8 || hi < 100.0 * lo) {
    fail(ErrorCode::InsufficientSpan, "log model needs >= 8 points spanning >= 2 decades");
  }
  const Line l = least_squares(x, y);
  return {l.intercept, l.slope, l.r_squared};
}

std::vector<double> default_lambda_grid() { return per_decade_grid(1e2, 1e6, 25); }

std::vector<double> fitting_window(std::span<const double> grid) {
  if (grid.empty()) return {};
  const double cut = *std::min_element(grid.begin(), grid.end()) * std::sqrt(10.0) * (1.0 - 1e-12);
  std::vector<double> out;
  for (double l : grid) {
    if (l >= cut) out.push_back(l);
  }
  return out;
}

}  // namespace oscint
