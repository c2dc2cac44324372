#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "lcsamp/model.hpp"

namespace lcsamp {

/// Design matrix with rows X_i and binary labels Y_i in {0, 1}.
struct LogisticData {
  Mat X;  // n x p
  Vec Y;  // n
};

struct LogisticGenConfig {
  int p = 2;
  long long n = 100;
  Vec theta_true;  // empty means the all-ones vector
  std::uint64_t seed = 0;
};

/// Synthetic design: each entry of X is +-1/sqrt(p) with equal
/// probability, and Y_i ~ Bernoulli(sigma(theta_true . X_i)).
/// Warns on stderr when n < p.
LogisticData logistic_generate(const LogisticGenConfig& cfg);

/// Writes X and Y as CSVs (headers x1..xp and y) plus a JSON sidecar
/// at x_path + ".json" carrying the supplied metadata.
void write_logistic_csv(const LogisticData& data, const std::string& x_path,
                        const std::string& y_path, const nlohmann::json& meta);

/// Reads a dataset written by write_logistic_csv.  Accepts files with
/// or without a header row; labels must be 0 or 1.
LogisticData read_logistic_csv(const std::string& x_path,
                               const std::string& y_path);

/// Default ridge weight 3 p / pi^2.
double default_lambda(int p);

/// Preconditioned ridge-logistic posterior.  With A = Sigma_X^{-1/2}
/// for the empirical second moment Sigma_X = (1/n) sum_i X_i X_i^T,
/// the potential in the whitened variable y (theta = A y) is
///   g(y) = sum_i [ log(1 + exp(Z_i . y)) - Y_i Z_i . y ] + lambda |y|^2 / 2
/// with Z_i = A X_i.  The certificate is m = lambda,
/// M = lambda + n/4, L_f = 0.1 n max_i |Z_i|.
struct LogisticModel {
  std::shared_ptr<const TargetModel> g;
  Mat A;  // theta = A y
  Mat Z;  // n x p, rows A X_i
  ConvexityCertificate cert;
  double lambda = 0.0;
  long long n = 0;
};

LogisticModel logistic_model(const LogisticData& data, double lambda);

/// Local strong-convexity lower bound for g on the ball of radius R
/// around the mode y_star:
///   m_R = lambda + nu_min( sum_i w(|Z_i . y_star| + R |Z_i|) Z_i Z_i^T )
/// with w(t) = exp(t) / (1 + exp(t))^2, the sigmoid derivative at the
/// largest logit magnitude row i can reach inside the ball.
/// Nonincreasing in R.
double logistic_m_R(const LogisticModel& model, const Vec& y_star, double R);

/// Tail-mass coefficient mu_R bounding the fourth moment of the
/// overshoot |y| - R outside the ball of radius R:
///   (p mu_R)^2 = 2 e^{x/2} (M/2)^{p/2} / ((m_R R)^{p+4} Gamma(p/2)) * S(x),
///   S(x) = sum_{j=0}^{4} C(4,j) (-x)^j Gamma(p+4-j, x),  x = m_R R^2.
/// The bound integrates (r-R)^4 r^{p-1} against the envelope
/// e^{x/2 - m_R R r} (M/2pi)^{p/2}, which dominates the density once
/// its potential grows at slope m_R R past the ball boundary.
/// Evaluated in log space with compensated summation of the
/// alternating series; raises an error when cancellation leaves no
/// significant digits or when the value overflows.
double logistic_mu_R(int p, double m_R, double M, double R);

/// Result of the radius search for convexification.
struct ConvexifyChoice {
  double R = 0.0;
  double barm = 0.0;   // min(m_{2R}, lambda + gamma/2)
  double gamma = 0.0;  // 2 eps / (p mu_R)
  double mu_R = 0.0;
  double m_2R = 0.0;
};

/// Maximizes R -> min(m_{2R}, lambda + eps / (p mu_R)) over
/// (0, 10/sqrt(lambda)]: a log-spaced grid brackets the peak, then
/// golden-section search refines it to relative tolerance 1e-3 in R.
ConvexifyChoice logistic_optimal_R(const LogisticModel& model,
                                   const Vec& y_star, double eps);

}  // namespace lcsamp
