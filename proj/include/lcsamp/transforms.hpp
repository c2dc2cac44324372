#pragma once

#include <functional>
#include <memory>
#include <string>

#include "lcsamp/model.hpp"
#include "lcsamp/sample_set.hpp"

namespace lcsamp {

/// Symmetric positive definite change of variables theta = A eta.
struct Preconditioner {
  Mat A;
};

/// Validates symmetry (relative tolerance 1e-12) and positive definiteness;
/// throws domain_error otherwise.
Preconditioner make_preconditioner(Mat A);

/// Inverse square root S^{-1/2} of a symmetric positive definite matrix.
/// Rejects matrices whose smallest eigenvalue is below 1e-10 times the
/// largest (numerically singular).
Preconditioner inverse_sqrt_preconditioner(const Mat& S);

/// Parameters of the quadratic tail penalty added outside the ball of radius
/// R around x0:  (gamma/2) (|x - x0| - R)^2 for |x - x0| > R.
struct ConvexifySpec {
  Vec x0;
  double R = 0.0;
  double gamma = 0.0;
  /// Curvature profile r -> m_r of the base target on the ball of radius r;
  /// evaluated at 2R for the certificate.
  std::function<double(double)> m_profile;
  double mu_R = 0.0;  ///< tail moment used for the approximation budget
  double m_inf = 0.0; ///< global curvature lower bound of the base target
};

struct TransformedModel {
  std::shared_ptr<const TargetModel> model;
  ConvexityCertificate cert;
};

/// Wraps `base` with the tail penalty.  The result matches `base` on the
/// ball, is C^1 across its boundary, and carries the certificate
/// barm = min(m_profile(2R), m_inf + gamma/2), barM = cert.M + gamma.
/// The wrapped model refuses the exponential integrator (its Hessian jumps
/// across the sphere); no Hessian Lipschitz constant is propagated.
TransformedModel convexify(std::shared_ptr<const TargetModel> base,
                           const ConvexityCertificate& cert,
                           const ConvexifySpec& spec);

/// Total-variation cost of sampling the penalized target instead of the
/// original: gamma * p * mu_R / 4.  Choosing gamma = 2 eps / (p mu_R) spends
/// exactly eps/2.
double convexified_tv_budget(double gamma, int p, double mu_R);

/// Change of variables g(eta) = f(A eta).  The caller supplies the
/// certificate valid for g (curvature bounds transform with the spectrum of
/// A, which the caller knows).
TransformedModel precondition(std::shared_ptr<const TargetModel> base,
                              const ConvexityCertificate& cert_for_g,
                              const Preconditioner& A);

/// Maps samples of the preconditioned variable eta back to theta = A eta and
/// notes the transform in the metadata.
SampleSet map_back(const SampleSet& set, const Preconditioner& A);

/// Plain numeric CSV matrix (optional header line tolerated on read).
Mat read_matrix_csv(const std::string& path);
void write_matrix_csv(const Mat& m, const std::string& path);

}  // namespace lcsamp
