#include "lcsamp/mixture.hpp"

#include <cmath>
#include <random>

#include "lcsamp/errors.hpp"
#include "lcsamp/special.hpp"

namespace lcsamp {

namespace {

/// sigma(t) = 1 / (1 + exp(-t)) without overflow for any t.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(1 + exp(-t)) without overflow for any t.
double log1p_exp_neg(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

}  // namespace

GaussianMixtureTarget::GaussianMixtureTarget(Vec a) : a_(std::move(a)) {
  if (a_.size() < 1) throw domain_error("mixture: a must be non-empty");
  if (!a_.allFinite()) throw domain_error("mixture: a has non-finite entries");
  a2_ = a_.squaredNorm();
  if (!(a2_ < 1.0)) {
    throw domain_error("mixture: requires |a| < 1 for strong log-concavity");
  }
}

int GaussianMixtureTarget::dim() const { return static_cast<int>(a_.size()); }

std::string GaussianMixtureTarget::tag() const { return "mixture"; }

double GaussianMixtureTarget::potential(const Vec& x) const {
  const double t = 2.0 * x.dot(a_);
  return 0.5 * (x - a_).squaredNorm() - log1p_exp_neg(t);
}

void GaussianMixtureTarget::gradient(const Vec& x, Vec& out) const {
  const double t = 2.0 * x.dot(a_);
  out = x - a_ + (2.0 * sigmoid(-t)) * a_;
}

void GaussianMixtureTarget::hessian(const Vec& x, Mat& out) const {
  const double t = 2.0 * x.dot(a_);
  const double w = sigmoid(t);
  out = Mat::Identity(dim(), dim());
  out.noalias() -= (4.0 * w * (1.0 - w)) * (a_ * a_.transpose());
}

StructuredHessian GaussianMixtureTarget::structured_hessian(const Vec& x) const {
  const double t = 2.0 * x.dot(a_);
  const double w = sigmoid(t);
  StructuredHessian sh;
  sh.background = 1.0;
  if (a2_ > 0.0) {
    sh.direction = a_ / std::sqrt(a2_);
    sh.dir_eigenvalue = 1.0 - 4.0 * a2_ * w * (1.0 - w);
  } else {
    sh.dir_eigenvalue = 1.0;
  }
  return sh;
}

ConvexityCertificate mixture_certificate(const Vec& a) {
  if (a.size() < 1 || !a.allFinite()) {
    throw domain_error("mixture_certificate: invalid a");
  }
  const double a2 = a.squaredNorm();
  if (!(a2 < 1.0)) {
    throw domain_error("mixture_certificate: requires |a| < 1");
  }
  const double norm = std::sqrt(a2);
  return ConvexityCertificate{1.0 - a2, 1.0, 0.5 * norm * norm * norm};
}

Vec mixture_direct_sample(const Vec& a, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool y = unif(rng) < 0.5;
  Vec z(a.size());
  for (long long i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return y ? Vec(z - a) : Vec(z + a);
}

double mixture_cstar(const Vec& a) {
  if (a.size() < 1 || !a.allFinite()) throw domain_error("mixture_cstar: invalid a");
  const double a2 = a.squaredNorm();
  if (!(a2 < 1.0)) throw domain_error("mixture_cstar: requires |a| < 1");
  auto phi = [a2](double c) { return c - std::tanh(c * a2); };
  double lo = -1.0, hi = 1.0;
  if (!(phi(lo) <= 0.0 && phi(hi) >= 0.0)) {
    throw domain_error("mixture_cstar: no sign change on [-1, 1]");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double v = phi(mid);
    if (v == 0.0) return mid;
    if (v < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double mixture_projection_cdf(double t, double shift) {
  return 0.5 * (normal_cdf(t - shift) + normal_cdf(t + shift));
}

double mixture_projection_density(double t, double shift) {
  return 0.5 * (normal_pdf(t - shift) + normal_pdf(t + shift));
}

}  // namespace lcsamp
