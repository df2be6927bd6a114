#include "circlewalk/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace circlewalk {

MeanEstimate mean_estimate(const std::vector<double>& xs) {
  MeanEstimate m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(m.n - 1) / static_cast<double>(m.n));
  }
  return m;
}

MeanEstimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den) {
  if (num.size() != den.size()) throw std::invalid_argument("ratio_estimate: size mismatch");
  MeanEstimate m;
  m.n = num.size();
  double sn = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i];
    sd += den[i];
  }
  if (sd <= 0.0) {
    m.mean = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.mean = sn / sd;
  if (m.n > 1) {
    const double dbar = sd / static_cast<double>(m.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      const double r = num[i] - m.mean * den[i];
      ss += r * r;
    }
    m.se = std::sqrt(ss / static_cast<double>(m.n - 1) / static_cast<double>(m.n)) / dbar;
  }
  return m;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) return f;
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
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: all x equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  // A flat, noiseless series is fitted perfectly.
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) {
    f.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.slope_ci_low = f.slope - t * f.slope_se;
    f.slope_ci_high = f.slope + t * f.slope_se;
  } else {
    f.slope_ci_low = f.slope_ci_high = f.slope;
  }
  return f;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace circlewalk
