#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace circlewalk {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean, from the sample variance
  std::size_t n = 0;

  double ci_low(double z = 1.96) const { return mean - z * se; }
  double ci_high(double z = 1.96) const { return mean + z * se; }
};

MeanEstimate mean_estimate(const std::vector<double>& xs);

/// Ratio Σnum / Σden with the cluster (delta-method) standard error, each
/// (num_i, den_i) pair coming from one independent trial.
MeanEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den);

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  double slope_ci_low = 0.0;   // 95% Student-t interval
  double slope_ci_high = 0.0;
  std::size_t points = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// 12 significant digits, the format used for every floating-point output.
std::string format_real(double v);

}  // namespace circlewalk
