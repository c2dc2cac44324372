#include "lcsamp/logistic.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lcsamp/errors.hpp"
#include "lcsamp/rng.hpp"
#include "lcsamp/special.hpp"
#include "csv_util.hpp"

namespace lcsamp {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  return std::log1p(std::exp(-std::abs(t))) + std::max(t, 0.0);
}

/// Rows that differ only by an overall sign produce the same sigmoid
/// arguments up to sign, so they can share one dot product per step.
/// Each row is flipped so that its first nonzero entry is positive and
/// exact duplicates are merged, counting how many originals carried
/// each sign.  Arbitrary real designs degrade to one group per row.
struct RowGroups {
  Mat rows;    // G x p canonical rows
  Vec npos;    // originals equal to the canonical row
  Vec nneg;    // originals equal to its negation
  Vec ntotal;  // npos + nneg
};

RowGroups group_rows(const Mat& Z) {
  const long long n = Z.rows();
  const long long p = Z.cols();
  std::unordered_map<std::string, long long> index;
  index.reserve(static_cast<std::size_t>(n));
  std::vector<Vec> canon;
  std::vector<double> npos, nneg;
  std::string key(static_cast<std::size_t>(p) * sizeof(double), '\0');
  for (long long i = 0; i < n; ++i) {
    Vec row = Z.row(i).transpose();
    double sign = 1.0;
    for (long long j = 0; j < p; ++j) {
      if (row[j] != 0.0) {
        sign = row[j] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    if (sign < 0.0) row = -row;
    std::memcpy(key.data(), row.data(), key.size());
    auto [it, inserted] = index.try_emplace(key, static_cast<long long>(canon.size()));
    if (inserted) {
      canon.push_back(row);
      npos.push_back(0.0);
      nneg.push_back(0.0);
    }
    (sign > 0.0 ? npos : nneg)[static_cast<std::size_t>(it->second)] += 1.0;
  }
  RowGroups g;
  const long long G = static_cast<long long>(canon.size());
  g.rows.resize(G, p);
  g.npos.resize(G);
  g.nneg.resize(G);
  for (long long k = 0; k < G; ++k) {
    g.rows.row(k) = canon[static_cast<std::size_t>(k)].transpose();
    g.npos[k] = npos[static_cast<std::size_t>(k)];
    g.nneg[k] = nneg[static_cast<std::size_t>(k)];
  }
  g.ntotal = g.npos + g.nneg;
  return g;
}

class LogisticGTarget final : public TargetModel {
 public:
  LogisticGTarget(const Mat& Z, const Vec& Y, double lambda)
      : p_(static_cast<int>(Z.cols())),
        lambda_(lambda),
        groups_(group_rows(Z)),
        zy_(Z.transpose() * Y) {}

  int dim() const override { return p_; }
  std::string tag() const override { return "logistic"; }

  double potential(const Vec& y) const override {
    Vec& t = scratch_t();
    t.noalias() = groups_.rows * y;
    double acc = 0.0;
    for (long long k = 0; k < t.size(); ++k) {
      acc += groups_.npos[k] * log1p_exp(t[k]) + groups_.nneg[k] * log1p_exp(-t[k]);
    }
    return acc - zy_.dot(y) + 0.5 * lambda_ * y.squaredNorm();
  }

  void gradient(const Vec& y, Vec& out) const override {
    Vec& t = scratch_t();
    t.noalias() = groups_.rows * y;
    for (long long k = 0; k < t.size(); ++k) {
      t[k] = groups_.ntotal[k] * sigmoid(t[k]) - groups_.nneg[k];
    }
    out.noalias() = groups_.rows.transpose() * t;
    out -= zy_;
    out += lambda_ * y;
  }

  bool has_hessian() const override { return true; }

  void hessian(const Vec& y, Mat& out) const override {
    Vec t = groups_.rows * y;
    for (long long k = 0; k < t.size(); ++k) {
      const double s = sigmoid(t[k]);
      t[k] = groups_.ntotal[k] * s * (1.0 - s);
    }
    out = groups_.rows.transpose() * t.asDiagonal() * groups_.rows;
    out.diagonal().array() += lambda_;
  }

  void hessian_vec(const Vec& y, const Vec& v, Vec& out) const override {
    Vec& t = scratch_t();
    Vec& u = scratch_u();
    t.noalias() = groups_.rows * y;
    u.noalias() = groups_.rows * v;
    for (long long k = 0; k < t.size(); ++k) {
      const double s = sigmoid(t[k]);
      u[k] *= groups_.ntotal[k] * s * (1.0 - s);
    }
    out.noalias() = groups_.rows.transpose() * u;
    out += lambda_ * v;
  }

 private:
  Vec& scratch_t() const {
    thread_local Vec t;
    t.resize(groups_.rows.rows());
    return t;
  }
  Vec& scratch_u() const {
    thread_local Vec u;
    u.resize(groups_.rows.rows());
    return u;
  }

  int p_;
  double lambda_;
  RowGroups groups_;
  Vec zy_;  // Z^T Y
};

/// w(t) = exp(t) / (1 + exp(t))^2 for t >= 0, in log space.  This is
/// the sigmoid derivative at t, the smallest value it takes over
/// logits of absolute value at most t.
double curvature_weight(double t) {
  return std::exp(-t - 2.0 * std::log1p(std::exp(-t)));
}

/// log of (p mu_R)^2; kept in log space so callers can defer the
/// exponential.  Throws only when the alternating series cancels.
double log_pmu2(int p, double m_R, double M, double R) {
  if (p < 1) throw domain_error("logistic_mu_R: requires p >= 1");
  if (!(m_R > 0.0) || !std::isfinite(m_R)) {
    throw domain_error("logistic_mu_R: requires m_R > 0");
  }
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw domain_error("logistic_mu_R: requires M > 0");
  }
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw domain_error("logistic_mu_R: requires R > 0");
  }
  const double x = m_R * R * R;
  const double half_p = 0.5 * static_cast<double>(p);
  const double log_pref = std::log(2.0) + half_p * std::log(0.5 * M) + 0.5 * x -
                          (p + 4.0) * std::log(m_R * R) - std::lgamma(half_p);
  const double binom[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
  double logmag[5];
  double logmax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 4; ++j) {
    logmag[j] = std::log(binom[j]) + j * std::log(x) +
                log_upper_incomplete_gamma(p + 4.0 - j, x);
    logmax = std::max(logmax, logmag[j]);
  }
  double sum = 0.0, comp = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const double term = (j % 2 == 0 ? 1.0 : -1.0) * std::exp(logmag[j] - logmax);
    const double next = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - next) + term;
    } else {
      comp += (term - next) + sum;
    }
    sum = next;
  }
  sum += comp;
  if (!(sum > 0.0)) {
    throw domain_error(
        "logistic_mu_R: alternating series cancelled to <= 0 even under "
        "compensated summation; mu_R is below numerical precision at this R");
  }
  return log_pref + logmax + std::log(sum);
}

}  // namespace

LogisticData logistic_generate(const LogisticGenConfig& cfg) {
  if (cfg.p < 1) throw domain_error("logistic_generate: requires p >= 1");
  if (cfg.n < 1) throw domain_error("logistic_generate: requires n >= 1");
  Vec theta = cfg.theta_true;
  if (theta.size() == 0) {
    theta = Vec::Ones(cfg.p);
  } else if (theta.size() != cfg.p) {
    throw domain_error("logistic_generate: theta_true has wrong dimension");
  }
  if (cfg.n < cfg.p) {
    std::cerr << "warning: logistic_generate: n = " << cfg.n << " < p = "
              << cfg.p << "; the design cannot have full column rank\n";
  }
  LogisticData data;
  data.X.resize(cfg.n, cfg.p);
  data.Y.resize(cfg.n);
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.p));
  for (long long i = 0; i < cfg.n; ++i) {
    for (int j = 0; j < cfg.p; ++j) {
      data.X(i, j) = unif(rng) < 0.5 ? scale : -scale;
    }
    const double t = data.X.row(i).dot(theta);
    data.Y[i] = unif(rng) < sigmoid(t) ? 1.0 : 0.0;
  }
  return data;
}

void write_logistic_csv(const LogisticData& data, const std::string& x_path,
                        const std::string& y_path, const nlohmann::json& meta) {
  if (data.X.rows() != data.Y.size()) {
    throw domain_error("write_logistic_csv: X and Y row counts differ");
  }
  if (!data.X.allFinite() || !data.Y.allFinite()) {
    throw io_error("write_logistic_csv: refusing to write non-finite values");
  }
  std::string out;
  for (long long j = 0; j < data.X.cols(); ++j) {
    if (j) out += ',';
    out += "x" + std::to_string(j + 1);
  }
  out += '\n';
  for (long long i = 0; i < data.X.rows(); ++i) {
    for (long long j = 0; j < data.X.cols(); ++j) {
      if (j) out += ',';
      detail::append_double(out, data.X(i, j));
    }
    out += '\n';
  }
  std::ofstream fx(x_path, std::ios::binary | std::ios::trunc);
  if (!fx) throw io_error("write_logistic_csv: cannot open " + x_path);
  fx << out;
  if (!fx) throw io_error("write_logistic_csv: write failed for " + x_path);

  std::string ys = "y\n";
  for (long long i = 0; i < data.Y.size(); ++i) {
    detail::append_double(ys, data.Y[i]);
    ys += '\n';
  }
  std::ofstream fy(y_path, std::ios::binary | std::ios::trunc);
  if (!fy) throw io_error("write_logistic_csv: cannot open " + y_path);
  fy << ys;
  if (!fy) throw io_error("write_logistic_csv: write failed for " + y_path);

  std::ofstream fm(x_path + ".json", std::ios::binary | std::ios::trunc);
  if (!fm) throw io_error("write_logistic_csv: cannot open " + x_path + ".json");
  fm << meta.dump(2) << '\n';
  if (!fm) throw io_error("write_logistic_csv: write failed for sidecar");
}

namespace {

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("read: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  bool first = true;
  long long lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    if (!detail::parse_row(line, row)) {
      if (first && !detail::any_numeric_field(line)) {
        first = false;
        continue;
      }
      throw io_error("read: malformed row at line " + std::to_string(lineno) +
                     " of " + path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw io_error("read: ragged row at line " + std::to_string(lineno) +
                     " of " + path);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw io_error("read: no data rows in " + path);
  return rows;
}

}  // namespace

LogisticData read_logistic_csv(const std::string& x_path,
                               const std::string& y_path) {
  const auto xr = read_numeric_rows(x_path);
  const auto yr = read_numeric_rows(y_path);
  if (yr.front().size() != 1) {
    throw io_error("read_logistic_csv: label file must have one column");
  }
  if (xr.size() != yr.size()) {
    throw io_error("read_logistic_csv: X and Y row counts differ");
  }
  LogisticData data;
  data.X.resize(static_cast<long long>(xr.size()),
                static_cast<long long>(xr.front().size()));
  data.Y.resize(static_cast<long long>(yr.size()));
  for (std::size_t i = 0; i < xr.size(); ++i) {
    for (std::size_t j = 0; j < xr[i].size(); ++j) {
      data.X(static_cast<long long>(i), static_cast<long long>(j)) = xr[i][j];
    }
    const double y = yr[i][0];
    if (y != 0.0 && y != 1.0) {
      throw io_error("read_logistic_csv: labels must be 0 or 1");
    }
    data.Y[static_cast<long long>(i)] = y;
  }
  if (!data.X.allFinite()) {
    throw io_error("read_logistic_csv: non-finite entry in " + x_path);
  }
  return data;
}

double default_lambda(int p) {
  if (p < 1) throw domain_error("default_lambda: requires p >= 1");
  return 3.0 * static_cast<double>(p) / (M_PI * M_PI);
}

LogisticModel logistic_model(const LogisticData& data, double lambda) {
  const long long n = data.X.rows();
  const long long p = data.X.cols();
  if (n < 1 || p < 1) throw domain_error("logistic_model: empty design");
  if (data.Y.size() != n) {
    throw domain_error("logistic_model: X and Y row counts differ");
  }
  if (!data.X.allFinite() || !data.Y.allFinite()) {
    throw domain_error("logistic_model: non-finite data");
  }
  for (long long i = 0; i < n; ++i) {
    if (data.Y[i] != 0.0 && data.Y[i] != 1.0) {
      throw domain_error("logistic_model: labels must be 0 or 1");
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw domain_error("logistic_model: requires lambda > 0");
  }

  const Mat sigma = (data.X.transpose() * data.X) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  if (es.info() != Eigen::Success) {
    throw domain_error("logistic_model: eigendecomposition of Sigma_X failed");
  }
  const double vmax = es.eigenvalues().maxCoeff();
  if (!(vmax > 0.0)) {
    throw domain_error("logistic_model: Sigma_X has no positive eigenvalue");
  }
  const Vec floored = es.eigenvalues().cwiseMax(1e-10 * vmax);
  Mat A = es.eigenvectors() *
          floored.cwiseInverse().cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
  A = 0.5 * (A + A.transpose());

  LogisticModel model;
  model.A = A;
  model.Z = data.X * A;
  model.lambda = lambda;
  model.n = n;
  const double max_row = model.Z.rowwise().norm().maxCoeff();
  model.cert = ConvexityCertificate{lambda, lambda + 0.25 * static_cast<double>(n),
                                    0.1 * static_cast<double>(n) * max_row};
  model.g = std::make_shared<LogisticGTarget>(model.Z, data.Y, lambda);
  return model;
}

double logistic_m_R(const LogisticModel& model, const Vec& y_star, double R) {
  if (!model.g) throw domain_error("logistic_m_R: empty model");
  if (y_star.size() != model.Z.cols()) {
    throw domain_error("logistic_m_R: y_star has wrong dimension");
  }
  if (!(R >= 0.0) || !std::isfinite(R)) {
    throw domain_error("logistic_m_R: requires R >= 0");
  }
  const Vec proj = (model.Z * y_star).cwiseAbs();
  const Vec norms = model.Z.rowwise().norm();
  Vec w(proj.size());
  for (long long i = 0; i < w.size(); ++i) {
    w[i] = curvature_weight(proj[i] + R * norms[i]);
  }
  const Mat B = model.Z.transpose() * w.asDiagonal() * model.Z;
  Eigen::SelfAdjointEigenSolver<Mat> es(B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw domain_error("logistic_m_R: eigendecomposition failed");
  }
  return model.lambda + es.eigenvalues().minCoeff();
}

double logistic_mu_R(int p, double m_R, double M, double R) {
  const double lp = log_pmu2(p, m_R, M, R);
  const double log_mu = 0.5 * lp - std::log(static_cast<double>(p));
  if (log_mu > 709.0) {
    throw domain_error("logistic_mu_R: value overflows a double; R is too small");
  }
  return std::exp(log_mu);
}

ConvexifyChoice logistic_optimal_R(const LogisticModel& model,
                                   const Vec& y_star, double eps) {
  if (!model.g) throw domain_error("logistic_optimal_R: empty model");
  if (!(eps > 0.0) || !(eps <= 0.5)) {
    throw domain_error("logistic_optimal_R: requires eps in (0, 1/2]");
  }
  const int p = static_cast<int>(model.Z.cols());
  const double lambda = model.lambda;
  const double M = model.cert.M;
  const double r_hi = 10.0 / std::sqrt(lambda);

  auto objective = [&](double R) {
    const double m_2R = logistic_m_R(model, y_star, 2.0 * R);
    double penalty_branch;
    try {
      const double lp = log_pmu2(p, logistic_m_R(model, y_star, R), M, R);
      penalty_branch = lambda + eps * std::exp(-0.5 * lp);
    } catch (const domain_error&) {
      // mu_R below precision means the penalty budget is unconstrained
      penalty_branch = std::numeric_limits<double>::infinity();
    }
    return std::min(m_2R, penalty_branch);
  };

  double best_r = r_hi;
  double best_val = -std::numeric_limits<double>::infinity();
  auto consider = [&](double R) {
    if (!(R > 0.0) || R > r_hi) return;
    const double v = objective(R);
    if (v > best_val) {
      best_val = v;
      best_r = R;
    }
  };

  // The peak sits where the falling m_2R branch crosses the rising penalty
  // branch, often at a small fraction of r_hi.  A log-spaced grid brackets
  // it before golden section refines.
  constexpr int kGrid = 48;
  const double r_lo = 1e-4 * r_hi;
  const double ratio = std::pow(r_hi / r_lo, 1.0 / (kGrid - 1));
  std::array<double, kGrid> grid;
  int best_k = 0;
  for (int k = 0; k < kGrid; ++k) {
    grid[k] = r_lo * std::pow(ratio, k);
    consider(grid[k]);
    if (best_r == grid[k]) best_k = k;
  }

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_k > 0 ? grid[best_k - 1] : grid[0] / ratio;
  double hi = best_k + 1 < kGrid ? grid[best_k + 1] : r_hi;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = objective(c), fd = objective(d);
  consider(c);
  consider(d);
  while (hi - lo > 1e-3 * r_hi) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = objective(c);
      consider(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = objective(d);
      consider(d);
    }
  }
  consider(0.5 * (lo + hi));

  ConvexifyChoice choice;
  choice.R = best_r;
  choice.m_2R = logistic_m_R(model, y_star, 2.0 * best_r);
  choice.mu_R = logistic_mu_R(p, logistic_m_R(model, y_star, best_r), M, best_r);
  choice.gamma = 2.0 * eps / (static_cast<double>(p) * choice.mu_R);
  if (!(choice.gamma > 0.0) || !std::isfinite(choice.gamma)) {
    throw domain_error("logistic_optimal_R: degenerate penalty weight");
  }
  choice.barm = std::min(choice.m_2R, lambda + 0.5 * choice.gamma);
  return choice;
}

}  // namespace lcsamp
