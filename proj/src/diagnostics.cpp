#include "lcsamp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "lcsamp/errors.hpp"
#include "csv_util.hpp"

namespace lcsamp {

Vec project(const Mat& samples, const Vec& direction) {
  if (samples.cols() != direction.size()) {
    throw domain_error("project: direction has wrong dimension");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-10) {
    throw domain_error("project: direction must have unit norm (within 1e-10)");
  }
  return samples * direction;
}

double ks_distance(Vec draws, const std::function<double(double)>& cdf) {
  const long long n = draws.size();
  if (n < 1) throw domain_error("ks_distance: needs at least one draw");
  if (!draws.allFinite()) throw domain_error("ks_distance: non-finite draw");
  std::sort(draws.data(), draws.data() + n);
  double sup = 0.0;
  for (long long i = 0; i < n; ++i) {
    const double f = cdf(draws[i]);
    if (!std::isfinite(f) || f < 0.0 || f > 1.0) {
      throw domain_error("ks_distance: CDF returned a value outside [0, 1]");
    }
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    sup = std::max({sup, hi, lo});
  }
  return sup;
}

double quantile_sorted(const Vec& sorted, double q) {
  const long long n = sorted.size();
  if (n < 1) throw domain_error("quantile_sorted: empty input");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw domain_error("quantile_sorted: q must lie in [0, 1]");
  }
  const double pos = q * static_cast<double>(n - 1);
  const long long lo = static_cast<long long>(std::floor(pos));
  const long long hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

struct ColumnSummary {
  double mean, median, q1, q3;
};

ColumnSummary summarize(const Mat& m, long long col) {
  Vec v = m.col(col);
  std::sort(v.data(), v.data() + v.size());
  ColumnSummary s;
  s.mean = v.mean();
  s.median = quantile_sorted(v, 0.5);
  s.q1 = quantile_sorted(v, 0.25);
  s.q3 = quantile_sorted(v, 0.75);
  return s;
}

}  // namespace

MarginalDistances marginal_distances(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) {
    throw domain_error("marginal_distances: dimension mismatch");
  }
  if (a.rows() < 1 || b.rows() < 1) {
    throw domain_error("marginal_distances: empty sample set");
  }
  const long long p = a.cols();
  MarginalDistances d;
  for (long long j = 0; j < p; ++j) {
    const ColumnSummary sa = summarize(a, j);
    const ColumnSummary sb = summarize(b, j);
    d.mean += std::abs(sa.mean - sb.mean);
    d.median += std::abs(sa.median - sb.median);
    d.q1 += std::abs(sa.q1 - sb.q1);
    d.q3 += std::abs(sa.q3 - sb.q3);
  }
  const double inv_p = 1.0 / static_cast<double>(p);
  d.mean *= inv_p;
  d.median *= inv_p;
  d.q1 *= inv_p;
  d.q3 *= inv_p;
  return d;
}

MomentReport moment_check(const Mat& samples, const Vec& mean_ref,
                          const Mat& cov_ref) {
  const long long n = samples.rows();
  const long long p = samples.cols();
  if (n < 30) throw domain_error("moment_check: needs at least 30 samples");
  if (mean_ref.size() != p || cov_ref.rows() != p || cov_ref.cols() != p) {
    throw domain_error("moment_check: reference dimension mismatch");
  }
  const Vec mean = samples.colwise().mean();
  const Mat centered = samples.rowwise() - mean.transpose();
  const Mat cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  MomentReport report;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (long long j = 0; j < p; ++j) {
    const double se = std::sqrt(cov_ref(j, j)) / sqrt_n;
    if (!(se > 0.0)) throw domain_error("moment_check: reference variance <= 0");
    const double ratio = std::abs(mean[j] - mean_ref[j]) / se;
    report.worst_mean_ratio = std::max(report.worst_mean_ratio, ratio);
    if (ratio > 4.0) ++report.mean_flags;
  }
  for (long long i = 0; i < p; ++i) {
    for (long long j = i; j < p; ++j) {
      double se;
      if (i == j) {
        se = cov_ref(i, i) * std::sqrt(2.0 / static_cast<double>(n));
      } else {
        se = std::sqrt((cov_ref(i, i) * cov_ref(j, j) +
                        cov_ref(i, j) * cov_ref(i, j)) /
                       static_cast<double>(n));
      }
      const double ratio = std::abs(cov(i, j) - cov_ref(i, j)) / se;
      report.worst_cov_ratio = std::max(report.worst_cov_ratio, ratio);
      if (ratio > 4.0) ++report.cov_flags;
    }
  }
  return report;
}

EnergyReport energy_bound_check(const Mat& samples, const Vec& theta_star,
                                double bound) {
  const long long n = samples.rows();
  if (n < 2) throw domain_error("energy_bound_check: needs at least 2 samples");
  if (samples.cols() != theta_star.size()) {
    throw domain_error("energy_bound_check: theta_star dimension mismatch");
  }
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw domain_error("energy_bound_check: requires a positive finite bound");
  }
  Vec sq(n);
  for (long long i = 0; i < n; ++i) {
    sq[i] = (samples.row(i).transpose() - theta_star).squaredNorm();
  }
  EnergyReport r;
  r.bound = bound;
  r.empirical = sq.mean();
  const double var = (sq.array() - r.empirical).square().sum() /
                     static_cast<double>(n - 1);
  r.se = std::sqrt(var / static_cast<double>(n));
  r.pass = r.empirical + 3.0 * r.se <= bound;
  return r;
}

void write_histogram_csv(const Vec& draws, int n_bins,
                         const std::function<double(double)>& density,
                         const std::string& path) {
  if (draws.size() < 1) throw domain_error("write_histogram_csv: no draws");
  if (n_bins < 1) throw domain_error("write_histogram_csv: requires n_bins >= 1");
  if (!draws.allFinite()) {
    throw domain_error("write_histogram_csv: non-finite draw");
  }
  double lo = draws.minCoeff();
  double hi = draws.maxCoeff();
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / n_bins;
  std::vector<long long> counts(static_cast<std::size_t>(n_bins), 0);
  for (long long i = 0; i < draws.size(); ++i) {
    long long k = static_cast<long long>((draws[i] - lo) / width);
    k = std::clamp(k, 0LL, static_cast<long long>(n_bins - 1));
    ++counts[static_cast<std::size_t>(k)];
  }
  std::string out = "bin_left,bin_right,count,analytic_density_at_midpoint\n";
  for (int k = 0; k < n_bins; ++k) {
    const double left = lo + k * width;
    const double right = lo + (k + 1) * width;
    detail::append_double(out, left);
    out += ',';
    detail::append_double(out, right);
    out += ',';
    out += std::to_string(counts[static_cast<std::size_t>(k)]);
    out += ',';
    detail::append_double(out, density(0.5 * (left + right)));
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("write_histogram_csv: cannot open " + path);
  f << out;
  if (!f) throw io_error("write_histogram_csv: write failed for " + path);
}

}  // namespace lcsamp
