#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lcsamp/model.hpp"
#include "lcsamp/plan.hpp"
#include "lcsamp/rng.hpp"
#include "lcsamp/sample_set.hpp"

namespace lcsamp {

/// Draw from N(theta_star, M^{-1} I): the Gaussian start matched to the
/// target's curvature upper bound.
Vec init_gaussian(const Vec& theta_star, double M, Rng& rng);

/// Spectral data for one exponential-integrator step at step size h:
/// for each Hessian eigenvalue lambda_i > 0,
///   m_coeffs_i = (1 - e^(-h lambda_i)) / lambda_i    in (0, h],
///   s_coeffs_i = (1 - e^(-2 h lambda_i)) / lambda_i  in (0, 2h].
struct OzakiOperators {
  Vec eigvals;
  Mat eigvecs;
  Vec m_coeffs;
  Vec s_coeffs;
};

/// Coefficient (1 - e^(-h lambda)) / lambda, switching to a truncated series
/// for |h lambda| < 1e-4 to avoid cancellation.
double ozaki_m_coeff(double lambda, double h);

/// Coefficient (1 - e^(-2 h lambda)) / lambda with the same series guard.
double ozaki_s_coeff(double lambda, double h);

/// Eigendecomposition of a symmetric positive definite Hessian plus the two
/// coefficient vectors above.  Throws domain_error if the decomposition
/// fails or any eigenvalue is <= 0.
OzakiOperators ozaki_operators(const Mat& hessian, double h);

/// One Euler step: x - h grad f(x) + sqrt(2h) xi.  The first overload draws
/// xi ~ N(0, I); the second takes it explicitly (deterministic, used for
/// tests and for building the other steps).  A non-finite gradient raises
/// divergence_error.
Vec lmc_step(const TargetModel& model, const Vec& x, double h, Rng& rng);
Vec lmc_step(const TargetModel& model, const Vec& x, double h, const Vec& xi);

/// One exponential-integrator step using the local Hessian:
/// x - M_k grad f(x) + Sigma_k^{1/2} xi, applied spectrally.  Uses the
/// model's structured Hessian when available, otherwise a dense
/// eigendecomposition.
Vec lmco_step(const TargetModel& model, const Vec& x, double h, Rng& rng);
Vec lmco_step(const TargetModel& model, const Vec& x, double h, const Vec& xi);

/// One second-order step needing only Hessian-vector products:
/// x - h (I - h H / 2) grad f(x) + sqrt(2h) (I - h H / 2) xi.
Vec lmco2_step(const TargetModel& model, const Vec& x, double h, Rng& rng);
Vec lmco2_step(const TargetModel& model, const Vec& x, double h, const Vec& xi);

/// Update rule actually executed by a run.
enum class StepKind { lmc, lmco, lmco2 };

/// Default update rule for a plan's algorithm.
StepKind step_kind_for(Algo algo);

/// Ensemble configuration.
struct RunConfig {
  long long n_chains = 1;
  std::uint64_t seed = 0;
  bool record_trajectory = false;  ///< off by default; K*p values per chain
  StepKind algo = StepKind::lmc;
  int n_threads = 0;  ///< 0 means all hardware threads; results never depend on it
};

/// Chain initialization rule.
struct InitSpec {
  enum class Kind { gaussian, fixed };
  Kind kind = Kind::gaussian;
  Vec center;      ///< theta_star for gaussian, the start point for fixed
  double M = 1.0;  ///< curvature bound for the gaussian draw

  static InitSpec gaussian(Vec theta_star, double M) {
    return InitSpec{Kind::gaussian, std::move(theta_star), M};
  }
  static InitSpec fixed(Vec x0) { return InitSpec{Kind::fixed, std::move(x0), 1.0}; }
};

/// Runs one chain for plan.K steps from x0 with its own generator seeded by
/// `seed`; returns the final state.  K = 0 returns x0.  With `trajectory`
/// non-null, stores the K+1 visited states (x0 first) one per row.
/// Divergence raises divergence_error carrying the step index.
Vec run_chain(const TargetModel& model, const SamplerPlan& plan, const Vec& x0,
              std::uint64_t seed, std::optional<StepKind> kind = std::nullopt,
              Mat* trajectory = nullptr);

/// Runs config.n_chains independent chains; chain i is seeded with
/// chain_seed(config.seed, i) and draws its start from `init`, so the result
/// is a pure function of (model, plan, init, n_chains, seed) regardless of
/// thread count.  Rows are in chain order.  With record_trajectory set,
/// per-chain trajectories are appended to *trajectories (which must then be
/// non-null).  The metadata carries seed, plan, model tag, N and wall time.
SampleSet run_ensemble(const TargetModel& model, const SamplerPlan& plan,
                       const InitSpec& init, const RunConfig& config,
                       std::vector<Mat>* trajectories = nullptr);

}  // namespace lcsamp
