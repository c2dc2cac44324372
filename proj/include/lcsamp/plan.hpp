#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace lcsamp {

/// Sampler families.  The first four have planners that certify a
/// total-variation budget; LMCO2 is the Hessian-vector-product variant of the
/// exponential integrator and is run empirically, without a certified budget.
enum class Algo { lmc, lmc_warm, lmc_convexified, lmco, lmco2 };

std::string algo_name(Algo algo);
std::optional<Algo> algo_from_name(std::string_view name);

/// Inputs a plan was derived from, kept for serialization and re-validation.
struct PlanInputs {
  int p = 0;
  double m = 0.0;  ///< strong convexity (barm for the convexified planner)
  double M = 0.0;  ///< gradient Lipschitz bound (barM for convexified)
  std::optional<double> L_f;   ///< Hessian Lipschitz bound (LMCO)
  std::optional<double> chi2;  ///< chi-square divergence bound (warm start)
  std::optional<double> mu2;   ///< normalized second moment (warm start)
};

/// Step size, horizon and iteration count certified to bring the sampler
/// within predicted_tv <= eps of the target in total variation.
struct SamplerPlan {
  Algo algo = Algo::lmc;
  double T = 0.0;   ///< continuous-time horizon
  double h = 0.0;   ///< step size
  long long K = 0;  ///< iteration count
  std::optional<double> alpha;  ///< interpolation exponent (cold-start LMC only)
  double eps = 0.0;
  double predicted_tv = 0.0;
  PlanInputs inputs;
};

/// Second-moment inputs describing a warm start distribution nu:
/// chi2_bound >= chi^2(nu | pi) and mu2 >= (M/p) E_nu |x - theta*|^2.
struct WarmStartSpec {
  double chi2_bound = 1.0;
  double mu2 = 1.0;
};

/// (1/2) sqrt(chi2) exp(-t m / 2): total-variation distance to the target
/// after running the continuous diffusion for time t from a start with
/// chi-square divergence chi2.  Requires m > 0, t >= 0, chi2 >= 0.
double mixing_bound(double t, double m, double chi2);

/// KL divergence bound between the law of K discretized steps of size h
/// started from the Gaussian approximation at the mode and the continuous
/// diffusion: p M^2 T h alpha / (2 (2 alpha - 1)) with T = K h.
/// Requires K >= alpha >= 1 and h <= 1/(alpha M).
double kl_discretization_bound_gaussian_start(long long K, double h, int p,
                                              double m, double M, double alpha);

/// Total-variation bound for the Gaussian-start Langevin chain:
/// (1/2) exp((p/4) log(M/m) - T m / 2) + sqrt(p M^2 T h alpha / (4 (2 alpha - 1))).
/// The first exponential is evaluated in log space so large p log(M/m) does
/// not overflow prematurely.  Requires h <= 1/(alpha M), T/h >= alpha >= 1,
/// 0 < m <= M.
double tv_bound_lmc(double T, double h, int p, double m, double M, double alpha);

/// Total-variation bound for the Gaussian-start exponential-integrator chain:
/// (1/2) exp((p/4) log(M/m) - T m / 2)
///   + sqrt(L_f^2 T h^2 p^2 (0.267 M^2 h T + 0.375)).
/// Requires p >= 2, h <= 1/(8M), T >= 4/(3M), 0 < m <= M, L_f >= 0.
double tv_bound_lmco(double T, double h, int p, double m, double M, double L_f);

/// Plan for the Langevin chain with Gaussian start.  Requires p >= 2,
/// 0 < m <= M, eps in (0, 1/2].  The returned plan satisfies
/// predicted_tv <= eps and re-asserts every precondition of tv_bound_lmc.
SamplerPlan plan_lmc(int p, double m, double M, double eps);

/// Plan for the Langevin chain from a warm start described by `warm`.
/// Throws infeasible_error when the horizon admits fewer than 2 steps or the
/// derived step size violates h <= 1/(2M).
SamplerPlan plan_lmc_warm(int p, double m, double M, double eps,
                          const WarmStartSpec& warm);

/// Plan for the exponential-integrator chain.  Requires a Hessian Lipschitz
/// bound L_f >= 0 in addition to the LMC inputs.
SamplerPlan plan_lmco(int p, double m, double M, double L_f, double eps);

/// Plan for the Langevin chain on a convexified target with certificate
/// (barm, barM).  Budgets eps/2 for sampling the modified target and leaves
/// eps/2 for the approximation error controlled by the convexification
/// (gamma <= 2 eps / (p mu_R) on the caller's side).
SamplerPlan plan_convexified(int p, double barm, double barM, double eps);

nlohmann::json plan_to_json(const SamplerPlan& plan);

/// Parses and re-validates a plan produced by plan_to_json; throws
/// domain_error on malformed input or invariant violations.
SamplerPlan plan_from_json(const nlohmann::json& j);

}  // namespace lcsamp
