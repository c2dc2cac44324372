#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "lcsamp/model.hpp"

namespace lcsamp {

/// Projects each sample row onto a direction, which must have unit
/// norm to within 1e-10.
Vec project(const Mat& samples, const Vec& direction);

/// Kolmogorov-Smirnov distance between the empirical law of the draws
/// and a continuous CDF:
///   sup_i max(|i/N - F(x_(i))|, |(i-1)/N - F(x_(i))|).
double ks_distance(Vec draws, const std::function<double(double)>& cdf);

/// Linear-interpolation quantile at position (N-1) q of an ascending
/// vector (the convention statistics packages label type 7).
double quantile_sorted(const Vec& sorted, double q);

/// Coordinate-wise L1 gaps between summary statistics of two sample
/// sets, each averaged over the p coordinates.
struct MarginalDistances {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

MarginalDistances marginal_distances(const Mat& a, const Mat& b);

/// Compares sample moments against reference values, flagging each
/// mean coordinate or covariance entry further than 4 asymptotic
/// standard errors from its target.  Requires at least 30 samples.
struct MomentReport {
  long long mean_flags = 0;
  long long cov_flags = 0;
  double worst_mean_ratio = 0.0;  // max |gap| / SE over mean coordinates
  double worst_cov_ratio = 0.0;   // max |gap| / SE over covariance entries
  bool pass() const { return mean_flags == 0 && cov_flags == 0; }
};

MomentReport moment_check(const Mat& samples, const Vec& mean_ref,
                          const Mat& cov_ref);

/// Tests mean |x - theta_star|^2 + 3 SE <= bound, with the Monte Carlo
/// slack on the estimate side.
struct EnergyReport {
  double empirical = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool pass = false;
};

EnergyReport energy_bound_check(const Mat& samples, const Vec& theta_star,
                                double bound);

/// Writes an equal-width histogram of the draws as CSV with columns
/// bin_left, bin_right, count, analytic_density_at_midpoint.
void write_histogram_csv(const Vec& draws, int n_bins,
                         const std::function<double(double)>& density,
                         const std::string& path);

}  // namespace lcsamp
