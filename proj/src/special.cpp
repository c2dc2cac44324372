#include "lcsamp/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lcsamp/errors.hpp"

namespace lcsamp {

namespace {

constexpr int kMaxIter = 20000;

/// Regularized lower tail P(s, x) by its power series; accurate for x < s + 1.
double lower_series_p(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) {
      return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  throw domain_error("upper_incomplete_gamma: series failed to converge (s=" +
                     std::to_string(s) + ", x=" + std::to_string(x) + ")");
}

/// Continued fraction H with Gamma(s, x) = e^(-x) x^s H, by the modified
/// Lentz scheme; accurate for x >= s + 1.
double upper_cf_h(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) return h;
  }
  throw domain_error(
      "upper_incomplete_gamma: continued fraction failed to converge (s=" +
      std::to_string(s) + ", x=" + std::to_string(x) + ")");
}

}  // namespace

double log_upper_incomplete_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw domain_error("upper_incomplete_gamma: requires s > 0");
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw domain_error("upper_incomplete_gamma: requires x >= 0");
  }
  if (x == 0.0) return std::lgamma(s);
  if (x < s + 1.0) {
    const double p = lower_series_p(s, x);
    return std::lgamma(s) + std::log1p(-p);
  }
  return -x + s * std::log(x) + std::log(upper_cf_h(s, x));
}

double upper_incomplete_gamma(double s, double x) {
  const double lg = log_upper_incomplete_gamma(s, x);
  if (lg > 709.0) {
    throw domain_error(
        "upper_incomplete_gamma: value overflows double (s=" +
        std::to_string(s) + ", x=" + std::to_string(x) +
        "); use log_upper_incomplete_gamma");
  }
  return std::exp(lg);
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t * M_SQRT1_2); }

double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

}  // namespace lcsamp
