#include "lcsamp/plan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "lcsamp/errors.hpp"

namespace lcsamp {

namespace {

constexpr double kRelSlack = 1e-9;

void require(bool ok, const char* msg) {
  if (!ok) throw domain_error(msg);
}

void validate_common(int p, double m, double M, double eps) {
  require(p >= 2, "planner requires dimension p >= 2");
  require(std::isfinite(m) && std::isfinite(M) && m > 0.0 && m <= M,
          "planner requires 0 < m <= M");
  require(std::isfinite(eps) && eps > 0.0 && eps <= 0.5,
          "planner requires eps in (0, 1/2]");
}

/// First (mixing) term shared by the Gaussian-start bounds, in log space.
double gaussian_start_mixing_term(double T, int p, double m, double M) {
  return 0.5 * std::exp(0.25 * p * std::log(M / m) - 0.5 * T * m);
}

void check_predicted(double predicted, double eps, const char* who) {
  if (!(predicted <= eps * (1.0 + kRelSlack))) {
    throw infeasible_error(std::string(who) +
                           ": derived plan misses its own budget (predicted_tv = " +
                           std::to_string(predicted) + " > eps = " +
                           std::to_string(eps) + ")");
  }
}

}  // namespace

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::lmc: return "LMC";
    case Algo::lmc_warm: return "LMC-warm";
    case Algo::lmc_convexified: return "LMC-convexified";
    case Algo::lmco: return "LMCO";
    case Algo::lmco2: return "LMCO2";
  }
  return "?";
}

std::optional<Algo> algo_from_name(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "lmc") return Algo::lmc;
  if (s == "lmc-warm") return Algo::lmc_warm;
  if (s == "lmc-convexified") return Algo::lmc_convexified;
  if (s == "lmco") return Algo::lmco;
  if (s == "lmco2") return Algo::lmco2;
  return std::nullopt;
}

double mixing_bound(double t, double m, double chi2) {
  require(std::isfinite(m) && m > 0.0, "mixing_bound: requires m > 0");
  require(std::isfinite(t) && t >= 0.0, "mixing_bound: requires t >= 0");
  require(std::isfinite(chi2) && chi2 >= 0.0, "mixing_bound: requires chi2 >= 0");
  return 0.5 * std::sqrt(chi2) * std::exp(-0.5 * t * m);
}

double kl_discretization_bound_gaussian_start(long long K, double h, int p,
                                              double m, double M, double alpha) {
  require(p >= 1, "kl bound: requires p >= 1");
  require(std::isfinite(m) && m > 0.0 && std::isfinite(M) && M > 0.0,
          "kl bound: requires m > 0 and M > 0");
  require(std::isfinite(alpha) && alpha >= 1.0, "kl bound: requires alpha >= 1");
  require(static_cast<double>(K) >= alpha, "kl bound: requires K >= alpha");
  require(std::isfinite(h) && h > 0.0 &&
              h * alpha * M <= 1.0 + kRelSlack,
          "kl bound: requires 0 < h <= 1/(alpha M)");
  const double T = static_cast<double>(K) * h;
  return p * M * M * T * h * alpha / (2.0 * (2.0 * alpha - 1.0));
}

double tv_bound_lmc(double T, double h, int p, double m, double M, double alpha) {
  require(p >= 1, "tv_bound_lmc: requires p >= 1");
  require(std::isfinite(m) && m > 0.0 && m <= M, "tv_bound_lmc: requires 0 < m <= M");
  require(std::isfinite(alpha) && alpha >= 1.0, "tv_bound_lmc: requires alpha >= 1");
  require(std::isfinite(h) && h > 0.0 && h * alpha * M <= 1.0 + kRelSlack,
          "tv_bound_lmc: requires 0 < h <= 1/(alpha M)");
  require(std::isfinite(T) && T > 0.0 && T / h >= alpha * (1.0 - kRelSlack),
          "tv_bound_lmc: requires T/h >= alpha");
  const double mixing = gaussian_start_mixing_term(T, p, m, M);
  const double discr =
      std::sqrt(p * M * M * T * h * alpha / (4.0 * (2.0 * alpha - 1.0)));
  return mixing + discr;
}

double tv_bound_lmco(double T, double h, int p, double m, double M, double L_f) {
  require(p >= 2, "tv_bound_lmco: requires p >= 2");
  require(std::isfinite(m) && m > 0.0 && m <= M, "tv_bound_lmco: requires 0 < m <= M");
  require(std::isfinite(L_f) && L_f >= 0.0, "tv_bound_lmco: requires L_f >= 0");
  require(std::isfinite(h) && h > 0.0 && h * 8.0 * M <= 1.0 + kRelSlack,
          "tv_bound_lmco: requires 0 < h <= 1/(8M)");
  require(std::isfinite(T) && T * 3.0 * M >= 4.0 * (1.0 - kRelSlack),
          "tv_bound_lmco: requires T >= 4/(3M)");
  const double mixing = gaussian_start_mixing_term(T, p, m, M);
  const double pp = static_cast<double>(p);
  const double discr = std::sqrt(L_f * L_f * T * h * h * pp * pp *
                                 (0.267 * M * M * h * T + 0.375));
  return mixing + discr;
}

SamplerPlan plan_lmc(int p, double m, double M, double eps) {
  validate_common(p, m, M, eps);
  const double T = (4.0 * std::log(1.0 / eps) + p * std::log(M / m)) / (2.0 * m);
  const double alpha = 0.5 * (1.0 + M * p * T / (eps * eps));
  const double h = eps * eps * (2.0 * alpha - 1.0) / (M * M * T * p * alpha);
  const double steps = T / h;
  const long long K = static_cast<long long>(std::ceil(steps));
  if (static_cast<double>(K) + kRelSlack < alpha) {
    throw infeasible_error("plan_lmc: iteration count fell below alpha");
  }

  SamplerPlan plan;
  plan.algo = Algo::lmc;
  plan.T = T;
  plan.h = h;
  plan.K = K;
  plan.alpha = alpha;
  plan.eps = eps;
  plan.predicted_tv = tv_bound_lmc(T, h, p, m, M, alpha);
  plan.inputs = PlanInputs{p, m, M, std::nullopt, std::nullopt, std::nullopt};
  check_predicted(plan.predicted_tv, eps, "plan_lmc");
  return plan;
}

SamplerPlan plan_lmc_warm(int p, double m, double M, double eps,
                          const WarmStartSpec& warm) {
  validate_common(p, m, M, eps);
  require(std::isfinite(warm.chi2_bound) && warm.chi2_bound > 0.0,
          "plan_lmc_warm: requires chi2_bound > 0");
  require(std::isfinite(warm.mu2) && warm.mu2 > 0.0,
          "plan_lmc_warm: requires mu2 > 0");
  const double T = (2.0 * std::log(1.0 / eps) + std::log(warm.chi2_bound)) / m;
  if (!(T > 0.0)) {
    throw infeasible_error(
        "plan_lmc_warm: horizon is non-positive; the start is already closer "
        "than eps in the chi-square sense");
  }
  const double h = 9.0 * eps * eps / (T * M * M * p * (6.0 + warm.mu2));
  if (h * 2.0 * M > 1.0 + kRelSlack) {
    throw infeasible_error(
        "plan_lmc_warm: derived step exceeds the stability range h <= 1/(2M)");
  }
  const long long K = static_cast<long long>(std::floor(T / h));
  if (K < 2) {
    throw infeasible_error("plan_lmc_warm: horizon admits fewer than 2 steps");
  }

  const double discr =
      std::sqrt(p * M * M * h * (h * warm.mu2 + 6.0 * T)) / 6.0;
  SamplerPlan plan;
  plan.algo = Algo::lmc_warm;
  plan.T = T;
  plan.h = h;
  plan.K = K;
  plan.eps = eps;
  plan.predicted_tv = mixing_bound(T, m, warm.chi2_bound) + discr;
  plan.inputs = PlanInputs{p, m, M, std::nullopt, warm.chi2_bound, warm.mu2};
  check_predicted(plan.predicted_tv, eps, "plan_lmc_warm");
  return plan;
}

SamplerPlan plan_lmco(int p, double m, double M, double L_f, double eps) {
  validate_common(p, m, M, eps);
  require(std::isfinite(L_f) && L_f >= 0.0, "plan_lmco: requires L_f >= 0");
  const double T = (4.0 * std::log(1.0 / eps) + p * std::log(M / m)) / (2.0 * m);
  const double hinv =
      std::max({std::pow(6.0 * L_f * M * T * p / eps, 2.0 / 3.0),
                1.25 * std::sqrt(T) * L_f * p / eps, 8.0 * M});
  const double h = 1.0 / hinv;
  const long long K = static_cast<long long>(std::floor(T * hinv));
  if (K < 1) throw infeasible_error("plan_lmco: horizon admits no steps");

  SamplerPlan plan;
  plan.algo = Algo::lmco;
  plan.T = T;
  plan.h = h;
  plan.K = K;
  plan.eps = eps;
  plan.predicted_tv = tv_bound_lmco(T, h, p, m, M, L_f);
  plan.inputs = PlanInputs{p, m, M, L_f, std::nullopt, std::nullopt};
  check_predicted(plan.predicted_tv, eps, "plan_lmco");
  return plan;
}

SamplerPlan plan_convexified(int p, double barm, double barM, double eps) {
  validate_common(p, barm, barM, eps);
  const double T =
      (4.0 * std::log(2.0 / eps) + p * std::log(barM / barm)) / (2.0 * barm);
  const double h = eps * eps / (4.0 * barM * barM * T * p);
  const long long K = static_cast<long long>(std::ceil(T / h));

  const double sampling = tv_bound_lmc(T, h, p, barm, barM, 1.0);
  if (!(sampling <= 0.5 * eps * (1.0 + kRelSlack))) {
    throw infeasible_error(
        "plan_convexified: sampling term misses its eps/2 budget");
  }
  SamplerPlan plan;
  plan.algo = Algo::lmc_convexified;
  plan.T = T;
  plan.h = h;
  plan.K = K;
  plan.eps = eps;
  plan.predicted_tv = sampling + 0.5 * eps;
  plan.inputs = PlanInputs{p, barm, barM, std::nullopt, std::nullopt, std::nullopt};
  check_predicted(plan.predicted_tv, eps, "plan_convexified");
  return plan;
}

nlohmann::json plan_to_json(const SamplerPlan& plan) {
  nlohmann::json inputs;
  const bool bar = plan.algo == Algo::lmc_convexified;
  inputs["p"] = plan.inputs.p;
  inputs[bar ? "barm" : "m"] = plan.inputs.m;
  inputs[bar ? "barM" : "M"] = plan.inputs.M;
  if (plan.inputs.L_f) inputs["L_f"] = *plan.inputs.L_f;
  if (plan.inputs.chi2) inputs["chi2"] = *plan.inputs.chi2;
  if (plan.inputs.mu2) inputs["mu2"] = *plan.inputs.mu2;

  nlohmann::json j;
  j["algo"] = algo_name(plan.algo);
  j["T"] = plan.T;
  j["h"] = plan.h;
  j["K"] = plan.K;
  j["alpha"] = plan.alpha ? nlohmann::json(*plan.alpha) : nlohmann::json(nullptr);
  j["eps"] = plan.eps;
  j["predicted_tv"] = plan.predicted_tv;
  j["inputs"] = inputs;
  return j;
}

SamplerPlan plan_from_json(const nlohmann::json& j) {
  SamplerPlan plan;
  try {
    const auto algo = algo_from_name(j.at("algo").get<std::string>());
    if (!algo || *algo == Algo::lmco2) {
      throw domain_error("plan_from_json: unknown or unplannable algo");
    }
    plan.algo = *algo;
    plan.T = j.at("T").get<double>();
    plan.h = j.at("h").get<double>();
    plan.K = j.at("K").get<long long>();
    if (j.contains("alpha") && !j.at("alpha").is_null()) {
      plan.alpha = j.at("alpha").get<double>();
    }
    plan.eps = j.at("eps").get<double>();
    plan.predicted_tv = j.at("predicted_tv").get<double>();
    const auto& in = j.at("inputs");
    plan.inputs.p = in.at("p").get<int>();
    const bool bar = plan.algo == Algo::lmc_convexified;
    plan.inputs.m = in.at(bar ? "barm" : "m").get<double>();
    plan.inputs.M = in.at(bar ? "barM" : "M").get<double>();
    if (in.contains("L_f")) plan.inputs.L_f = in.at("L_f").get<double>();
    if (in.contains("chi2")) plan.inputs.chi2 = in.at("chi2").get<double>();
    if (in.contains("mu2")) plan.inputs.mu2 = in.at("mu2").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw domain_error(std::string("plan_from_json: malformed plan: ") + e.what());
  }

  // Re-assert the plan's own guarantee rather than trusting the file.
  const auto& in = plan.inputs;
  require(plan.K >= 1 && plan.h > 0.0 && plan.T > 0.0,
          "plan_from_json: requires K >= 1, h > 0, T > 0");
  require(plan.eps > 0.0 && plan.eps <= 0.5,
          "plan_from_json: requires eps in (0, 1/2]");
  // K must match T/h under the plan's rounding rule; one step of slack
  // absorbs the double rounding of step sizes stored as reciprocals.
  const bool floor_rounding =
      plan.algo == Algo::lmc_warm || plan.algo == Algo::lmco;
  const double steps = plan.T / plan.h;
  const long long k_expected = static_cast<long long>(
      floor_rounding ? std::floor(steps) : std::ceil(steps));
  if (std::llabs(plan.K - k_expected) > 1) {
    throw domain_error("plan_from_json: K inconsistent with T and h");
  }
  double expected = 0.0;
  switch (plan.algo) {
    case Algo::lmc:
      require(plan.alpha.has_value(), "plan_from_json: LMC plan lacks alpha");
      expected = tv_bound_lmc(plan.T, plan.h, in.p, in.m, in.M, *plan.alpha);
      break;
    case Algo::lmc_warm: {
      require(in.chi2.has_value() && in.mu2.has_value(),
              "plan_from_json: warm plan lacks chi2/mu2");
      const double discr =
          std::sqrt(in.p * in.M * in.M * plan.h * (plan.h * *in.mu2 + 6.0 * plan.T)) /
          6.0;
      expected = mixing_bound(plan.T, in.m, *in.chi2) + discr;
      break;
    }
    case Algo::lmc_convexified:
      expected = tv_bound_lmc(plan.T, plan.h, in.p, in.m, in.M, 1.0) +
                 0.5 * plan.eps;
      break;
    case Algo::lmco:
      require(in.L_f.has_value(), "plan_from_json: LMCO plan lacks L_f");
      expected = tv_bound_lmco(plan.T, plan.h, in.p, in.m, in.M, *in.L_f);
      break;
    case Algo::lmco2:
      break;  // rejected above
  }
  if (!(std::fabs(expected - plan.predicted_tv) <=
        1e-9 * std::max(1.0, std::fabs(expected)))) {
    throw domain_error("plan_from_json: predicted_tv inconsistent with the plan");
  }
  check_predicted(plan.predicted_tv, plan.eps, "plan_from_json");
  return plan;
}

}  // namespace lcsamp
