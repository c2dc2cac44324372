#pragma once

#include <Eigen/Core>

#include "lcsamp/model.hpp"
#include "lcsamp/rng.hpp"

namespace lcsamp {

/// Two-component Gaussian mixture with equal weights and unit covariance,
/// exp(-f(x)) proportional to exp(-|x-a|^2/2) + exp(-|x+a|^2/2).
///
/// The potential is
///   f(x) = |x - a|^2 / 2 - log(1 + exp(-2 x.a))
/// which is smooth and strongly log-concave whenever |a| < 1.
class GaussianMixtureTarget final : public TargetModel {
 public:
  /// Requires |a| < 1; the construction fails otherwise because the
  /// mixture stops being strongly log-concave.
  explicit GaussianMixtureTarget(Vec a);

  int dim() const override;
  std::string tag() const override;
  double potential(const Vec& x) const override;
  void gradient(const Vec& x, Vec& out) const override;
  bool has_hessian() const override { return true; }
  void hessian(const Vec& x, Mat& out) const override;
  bool has_structured_hessian() const override { return true; }
  StructuredHessian structured_hessian(const Vec& x) const override;

  const Vec& separation() const { return a_; }

 private:
  Vec a_;
  double a2_;  // |a|^2
};

/// Certificate for the mixture target: m = 1 - |a|^2, M = 1,
/// L_f = |a|^3 / 2.  The sharp Hessian Lipschitz constant is
/// 4 |a|^3 / (3 sqrt 3), about 1.54x larger than this L_f, so a
/// certificate_probe with many pairs can flag the Hessian clause in low
/// dimension; the planners keep the smaller constant.
ConvexityCertificate mixture_certificate(const Vec& a);

/// One exact draw from the mixture: Y ~ Bernoulli(1/2), Z ~ N(0, I),
/// return Y (Z - a) + (1 - Y)(Z + a).  Consumes one uniform then
/// dim(a) normals from the generator.
Vec mixture_direct_sample(const Vec& a, Rng& rng);

/// Solves c = 1 - 2 / (1 + exp(2 c |a|^2)) by bisection on [-1, 1] to
/// absolute width 1e-12.  The stationary point of the potential is
/// c* a; for |a| < 1 the unique root is c* = 0.
double mixture_cstar(const Vec& a);

/// CDF of u.X for a unit vector u when X follows the mixture and
/// shift = u.a:  F(t) = Phi(t - shift)/2 + Phi(t + shift)/2.
double mixture_projection_cdf(double t, double shift);

/// Density of the same projection.
double mixture_projection_density(double t, double shift);

}  // namespace lcsamp
