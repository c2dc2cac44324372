#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "lcsamp/errors.hpp"

namespace lcsamp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Hessian of the form  background * I + (dir_eigenvalue - background) * u u^T
/// with u = direction (unit norm).  An empty direction means a multiple of
/// the identity.  Lets samplers act spectrally in O(p) without a dense
/// eigendecomposition.
struct StructuredHessian {
  double background = 0.0;
  Vec direction;
  double dir_eigenvalue = 0.0;
};

/// A potential f whose density exp(-f) is to be sampled.
///
/// Implementations must be immutable after construction and safe to call
/// concurrently from several threads.  `gradient(x, out)` is the hot path and
/// should not allocate.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual int dim() const = 0;

  /// Short identifier written into sample metadata (e.g. "mixture").
  virtual std::string tag() const = 0;

  virtual double potential(const Vec& x) const = 0;

  virtual void gradient(const Vec& x, Vec& out) const = 0;

  Vec gradient(const Vec& x) const {
    Vec g(dim());
    gradient(x, g);
    return g;
  }

  virtual bool has_hessian() const { return false; }

  /// Dense Hessian; throws capability_error unless has_hessian().
  virtual void hessian(const Vec& x, Mat& out) const;

  Mat hessian(const Vec& x) const {
    Mat h(dim(), dim());
    hessian(x, h);
    return h;
  }

  /// Hessian-vector product.  Default forms the dense Hessian; models with
  /// cheaper structure override this.
  virtual void hessian_vec(const Vec& x, const Vec& v, Vec& out) const;

  virtual bool has_structured_hessian() const { return false; }

  /// Identity-plus-rank-one form of the Hessian where available; throws
  /// capability_error otherwise.
  virtual StructuredHessian structured_hessian(const Vec& x) const;

  /// Whether the exponential-integrator sampler may use this model.  Requires
  /// a Hessian that is continuous in x; wrappers that are only C^1 disable it.
  virtual bool supports_lmco() const { return has_hessian(); }
};

/// Curvature bounds m I <= H(x) <= M I certified for a model, with an
/// optional Lipschitz constant for the Hessian itself.
struct ConvexityCertificate {
  double m = 0.0;
  double M = 0.0;
  std::optional<double> L_f;
};

/// Validates a certificate's internal constraints (0 <= m <= M, M > 0,
/// L_f >= 0 when present); throws domain_error.
void validate_certificate(const ConvexityCertificate& cert);

/// Result of minimize_gd.
struct StationaryPoint {
  Vec theta_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
  long long iterations = 0;
};

/// Outcome of certificate_probe.
struct ViolationReport {
  long long n_pairs = 0;
  long long lower_violations = 0;      ///< strong-convexity lower bound failures
  long long lipschitz_violations = 0;  ///< gradient-Lipschitz failures
  long long hessian_violations = 0;    ///< Hessian-Lipschitz failures (if L_f given)
  double worst_lower_margin = 0.0;     ///< most negative slack observed
  double worst_lipschitz_margin = 0.0;
  double worst_hessian_margin = 0.0;

  bool clean() const {
    return lower_violations == 0 && lipschitz_violations == 0 &&
           hessian_violations == 0;
  }
};

/// Materializes the Hessian at x from the dense or structured interface;
/// throws capability_error if the model provides neither.
Mat dense_hessian(const TargetModel& model, const Vec& x);

/// Default finite-difference step: 1e-5 * (1 + max_i |x_i|).
double default_fd_step(const Vec& x);

/// Max absolute error between the model gradient and a centered finite
/// difference of the potential at x.  Throws domain_error naming the
/// coordinate if the potential is non-finite at a probe point.
double fd_gradient_check(const TargetModel& model, const Vec& x, double step);

/// Max absolute entry error between the model Hessian and the symmetrized
/// finite-difference Jacobian of the gradient.  Throws capability_error if
/// the model has neither a dense nor a structured Hessian.
double fd_hessian_check(const TargetModel& model, const Vec& x, double step);

/// Samples n_pairs random point pairs from a cube of half-width 3/sqrt(m)
/// around `center` (the model's minimizer when known, otherwise the origin)
/// and tests the certificate inequalities with 1e-9 slack:
///   f(x) - f(y) - <grad f(y), x - y> >= (m/2) |x - y|^2
///   |grad f(x) - grad f(y)|          <= M |x - y|
///   |hess f(x) - hess f(y)|_2        <= L_f |x - y|   (when L_f is present
///                                                      and a Hessian exists)
ViolationReport certificate_probe(const TargetModel& model,
                                  const ConvexityCertificate& cert,
                                  long long n_pairs, std::uint64_t seed,
                                  const std::optional<Vec>& center = std::nullopt);

/// Gradient descent with fixed step 1/(2M).  Stops once
/// |grad f|^2 <= 2 m tol (certifying f - f* <= tol) and |grad f| <= tol.
/// The iteration cap follows from the geometric contraction rate
/// (1 - m/(2M)) applied to the surrogate gap (M/2)|grad f(x0)|^2 / m^2;
/// exceeding it throws convergence_error carrying the last iterate.
StationaryPoint minimize_gd(const TargetModel& model,
                            const ConvexityCertificate& cert, const Vec& x0,
                            double tol);

}  // namespace lcsamp
