#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace oscint {

struct DecaySample {
  double lambda = 0.0;
  double magnitude = 0.0;
  double error = 0.0;
};

struct DecayFit {
  double delta_hat = 0.0;
  double C_hat = 0.0;
  double r_squared = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t used = 0;  // samples entering the regression
};

// Least squares of log magnitude against log lambda. Samples with
// magnitude <= 10 * error are dropped; more than 20% of them is NoiseDominated.
DecayFit fit_decay(std::span<const DecaySample> samples);

struct LogModelFit {
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
};

// measure = eps^p (a + b ln(1/eps)), least squares after dividing by eps^p.
LogModelFit fit_log_model(std::span<const std::pair<double, double>> points, double p);

// 25 points per decade on [1e2, 1e6].
std::vector<double> default_lambda_grid();
// Drops the lowest half-decade of a grid.
std::vector<double> fitting_window(std::span<const double> grid);

}  // namespace oscint
