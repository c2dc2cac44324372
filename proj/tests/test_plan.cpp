#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "check_macros.hpp"
#include "lcsamp/errors.hpp"
#include "lcsamp/plan.hpp"

using lcsamp::Algo;
using lcsamp::plan_convexified;
using lcsamp::plan_lmc;
using lcsamp::plan_lmc_warm;
using lcsamp::plan_lmco;
using lcsamp::SamplerPlan;
using lcsamp::WarmStartSpec;

TEST_CASE("algo names round-trip and parse case-insensitively") {
  for (Algo a : {Algo::lmc, Algo::lmc_warm, Algo::lmc_convexified, Algo::lmco,
                 Algo::lmco2}) {
    const auto back = lcsamp::algo_from_name(lcsamp::algo_name(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK(lcsamp::algo_from_name("lmc") == Algo::lmc);
  CHECK(lcsamp::algo_from_name("LMC-WARM") == Algo::lmc_warm);
  CHECK_FALSE(lcsamp::algo_from_name("nope").has_value());
}

TEST_CASE("bound functions match their closed forms") {
  // mixing: (1/2) sqrt(chi2) exp(-t m / 2)
  CHECK_REL(lcsamp::mixing_bound(0.0, 1.0, 1.0), 0.5, 1e-15);
  CHECK_REL(lcsamp::mixing_bound(2.0, 1.5, 4.0), std::exp(-1.5), 1e-13);

  // kl: p M^2 T h alpha / (2 (2 alpha - 1)) with T = K h
  CHECK_REL(lcsamp::kl_discretization_bound_gaussian_start(10, 0.1, 2, 1.0,
                                                           1.0, 2.0),
            2.0 * 1.0 * 1.0 * 0.1 * 2.0 / 6.0, 1e-13);

  // tv_lmc = (1/2) exp((p/4) log(M/m) - T m/2) + sqrt(kl / 2)
  const double T = 3.0, h = 0.01, alpha = 2.5;
  const int p = 4;
  const double m = 0.5, M = 2.0;
  const double mix = 0.5 * std::exp(0.25 * p * std::log(M / m) - 0.5 * T * m);
  const double disc = std::sqrt(p * M * M * T * h * alpha / (4 * (2 * alpha - 1)));
  CHECK_REL(lcsamp::tv_bound_lmc(T, h, p, m, M, alpha), mix + disc, 1e-13);

  // tv_lmco adds sqrt(L^2 T h^2 p^2 (0.267 M^2 h T + 0.375)) instead
  const double L = 0.3;
  const double disc2 = std::sqrt(L * L * T * h * h * p * p *
                                 (0.267 * M * M * h * T + 0.375));
  CHECK_REL(lcsamp::tv_bound_lmco(T, h, p, m, M, L), mix + disc2, 1e-13);
}

TEST_CASE("bound functions reject out-of-domain arguments") {
  CHECK_THROWS_AS((void)lcsamp::mixing_bound(-1.0, 1.0, 1.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::mixing_bound(1.0, 0.0, 1.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::mixing_bound(1.0, 1.0, -0.5),
                  lcsamp::domain_error);

  // h must satisfy h <= 1/(alpha M), alpha >= 1, K >= alpha.
  CHECK_THROWS_AS((void)lcsamp::kl_discretization_bound_gaussian_start(
                      10, 0.6, 2, 1.0, 1.0, 2.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::kl_discretization_bound_gaussian_start(
                      10, 0.1, 2, 1.0, 1.0, 0.5),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::kl_discretization_bound_gaussian_start(
                      1, 0.1, 2, 1.0, 1.0, 2.0),
                  lcsamp::domain_error);

  CHECK_THROWS_AS((void)lcsamp::tv_bound_lmc(3.0, 0.9, 2, 1.0, 1.0, 2.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::tv_bound_lmc(3.0, 0.01, 2, 0.0, 1.0, 2.0),
                  lcsamp::domain_error);

  // tv_lmco needs p >= 2, h <= 1/(8M), T >= 4/(3M).
  CHECK_THROWS_AS((void)lcsamp::tv_bound_lmco(3.0, 0.01, 1, 0.5, 1.0, 0.3),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::tv_bound_lmco(3.0, 0.2, 2, 0.5, 1.0, 0.3),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::tv_bound_lmco(1.0, 0.01, 2, 0.5, 1.0, 0.3),
                  lcsamp::domain_error);
}

TEST_CASE("plan_lmc desk example") {
  const SamplerPlan plan = plan_lmc(2, 1.0, 1.0, 0.5);
  CHECK(plan.algo == Algo::lmc);
  CHECK_REL(plan.T, 2.0 * std::log(2.0), 1e-9);
  REQUIRE(plan.alpha.has_value());
  CHECK_REL(*plan.alpha, 6.045177444479562, 1e-9);
  CHECK_REL(plan.h, 0.165421116118, 1e-9);
  CHECK(plan.K == 9);
  CHECK_REL(plan.predicted_tv, 0.5, 1e-9);
  CHECK(plan.predicted_tv <= 0.5 * (1.0 + 1e-9));
  CHECK(plan.inputs.p == 2);
  CHECK(plan.inputs.m == 1.0);
  CHECK(plan.inputs.M == 1.0);
  CHECK(plan.eps == 0.5);
}

TEST_CASE("plan_lmc iteration counts across dimensions") {
  const std::map<int, long long> expected = {
      {8, 87098},     {12, 184350},   {16, 329705},  {20, 532388},
      {30, 1350444},  {40, 2728589},  {60, 7741693}};
  for (const auto& [p, K] : expected) {
    const SamplerPlan plan = plan_lmc(p, 0.5, 1.0, 0.1);
    CAPTURE(p);
    CHECK(plan.K >= K - 1);
    CHECK(plan.K <= K + 1);
  }
}

TEST_CASE("plan_lmc mid-accuracy example") {
  const SamplerPlan plan = plan_lmc(2, 0.5, 1.0, 0.2);
  CHECK_REL(plan.T, 7.82404601086, 1e-9);
  REQUIRE(plan.alpha.has_value());
  CHECK_REL(*plan.alpha, 196.101150271, 1e-9);
  CHECK_REL(plan.h, 0.0050994091499, 1e-9);
  CHECK(plan.K == 1535);
}

TEST_CASE("plan_lmc p=8 example") {
  const SamplerPlan plan = plan_lmc(8, 0.5, 1.0, 0.1);
  CHECK_REL(plan.T, 14.7555178165, 1e-9);
  CHECK_REL(plan.h, 0.000169413792444, 1e-9);
  CHECK(plan.K == 87098);
}

TEST_CASE("plan_lmc invariants on a parameter grid") {
  for (int p : {2, 8, 20}) {
    for (double m : {0.5, 1.0}) {
      for (double M : {1.0, 3.0}) {
        for (double eps : {0.1, 0.3, 0.5}) {
          CAPTURE(p);
          CAPTURE(m);
          CAPTURE(M);
          CAPTURE(eps);
          const SamplerPlan plan = plan_lmc(p, m, M, eps);
          CHECK(plan.K >= 1);
          CHECK(plan.h > 0.0);
          CHECK(plan.T > 0.0);
          REQUIRE(plan.alpha.has_value());
          CHECK(*plan.alpha >= 1.0);
          CHECK(plan.h <= (1.0 + 1e-12) / (*plan.alpha * M));
          CHECK(plan.K >= static_cast<long long>(plan.T / plan.h));
          CHECK(plan.K <= static_cast<long long>(plan.T / plan.h) + 1);
          CHECK(plan.predicted_tv <= eps * (1.0 + 1e-9));
          // The recorded budget is the bound evaluated at the plan itself.
          CHECK_REL(plan.predicted_tv,
                    lcsamp::tv_bound_lmc(plan.T, plan.h, p, m, M, *plan.alpha),
                    1e-12);
        }
      }
    }
  }
}

TEST_CASE("plan_lmc cost grows with dimension and accuracy") {
  CHECK(plan_lmc(20, 0.5, 1.0, 0.1).K > plan_lmc(8, 0.5, 1.0, 0.1).K);
  CHECK(plan_lmc(8, 0.5, 1.0, 0.1).K > plan_lmc(2, 0.5, 1.0, 0.1).K);
  CHECK(plan_lmc(8, 0.5, 1.0, 0.05).K > plan_lmc(8, 0.5, 1.0, 0.1).K);
  CHECK(plan_lmc(8, 0.5, 1.0, 0.1).K > plan_lmc(8, 0.5, 1.0, 0.3).K);
}

TEST_CASE("plan_lmc validates its inputs") {
  CHECK_THROWS_AS((void)plan_lmc(2, 1.0, 1.0, 0.6), lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc(2, 1.0, 1.0, 0.0), lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc(2, 1.0, 1.0, -0.1), lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc(1, 1.0, 1.0, 0.1), lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc(2, 0.0, 1.0, 0.1), lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc(2, 2.0, 1.0, 0.1), lcsamp::domain_error);
  CHECK_NOTHROW((void)plan_lmc(2, 1.0, 1.0, 0.5));
}

TEST_CASE("plan_lmc_warm desk example") {
  const SamplerPlan plan = plan_lmc_warm(2, 1.0, 1.0, 0.1, {1.0, 1.0});
  CHECK(plan.algo == Algo::lmc_warm);
  CHECK_REL(plan.T, 4.60517018599, 1e-9);
  CHECK_REL(plan.h, 0.00139594654897, 1e-9);
  CHECK(plan.K == 3298);
  CHECK_REL(plan.predicted_tv, 0.0962921743076, 1e-9);
  CHECK(plan.predicted_tv <= 0.1);
  CHECK(plan.h <= 0.5 / plan.inputs.M + 1e-15);
  REQUIRE(plan.inputs.chi2.has_value());
  CHECK(*plan.inputs.chi2 == 1.0);
  REQUIRE(plan.inputs.mu2.has_value());
  CHECK(*plan.inputs.mu2 == 1.0);
}

TEST_CASE("plan_lmc_warm rejects a start too accurate to plan for") {
  WarmStartSpec warm;
  warm.chi2_bound = 0.395;
  warm.mu2 = 0.01;
  CHECK_THROWS_AS((void)plan_lmc_warm(2, 1.0, 1.0, 0.49, warm),
                  lcsamp::infeasible_error);
}

TEST_CASE("plan_lmc_warm validates the start description") {
  CHECK_THROWS_AS((void)plan_lmc_warm(2, 1.0, 1.0, 0.1, {-1.0, 1.0}),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)plan_lmc_warm(2, 1.0, 1.0, 0.1, {1.0, 0.0}),
                  lcsamp::domain_error);
}

TEST_CASE("plan_convexified desk example") {
  const SamplerPlan plan = plan_convexified(2, 1.0, 1.0, 0.2);
  CHECK(plan.algo == Algo::lmc_convexified);
  CHECK_REL(plan.T, 4.60517018599, 1e-9);
  CHECK_REL(plan.h, 0.00108573620476, 1e-9);
  CHECK(plan.K == 4242);
  CHECK_REL(plan.predicted_tv, 0.2, 1e-9);
  // eps/2 goes to sampling the modified target, eps/2 to the approximation.
  CHECK_REL(lcsamp::tv_bound_lmc(plan.T, plan.h, 2, 1.0, 1.0, 1.0), 0.1, 1e-9);
}

TEST_CASE("plan_lmco desk example") {
  const double L = 0.17677669529663687;  // 2^{-5/2}
  const SamplerPlan plan = plan_lmco(8, 0.5, 1.0, L, 0.1);
  CHECK(plan.algo == Algo::lmco);
  CHECK_REL(plan.T, 14.7555178165, 1e-9);
  CHECK_REL(plan.h, 1.0 / 116.166383397, 1e-9);
  CHECK(plan.K == 1714);
  CHECK_REL(plan.predicted_tv, 0.0799039119199, 1e-9);
  REQUIRE(plan.inputs.L_f.has_value());
  CHECK(*plan.inputs.L_f == L);

  // The budget is the bound itself, and the step has no slack to double.
  CHECK_REL(plan.predicted_tv,
            lcsamp::tv_bound_lmco(plan.T, plan.h, 8, 0.5, 1.0, L), 1e-12);
  CHECK(lcsamp::tv_bound_lmco(plan.T, 2.0 * plan.h, 8, 0.5, 1.0, L) > 0.1);
}

TEST_CASE("plan_lmco beats plan_lmc when curvature varies slowly") {
  const SamplerPlan fast = plan_lmco(8, 0.5, 1.0, 0.17677669529663687, 0.1);
  const SamplerPlan slow = plan_lmc(8, 0.5, 1.0, 0.1);
  CHECK(fast.K * 10 < slow.K);
}

TEST_CASE("plan_lmco validates L_f") {
  CHECK_THROWS_AS((void)plan_lmco(8, 0.5, 1.0, -0.1, 0.1),
                  lcsamp::domain_error);
  CHECK_NOTHROW((void)plan_lmco(8, 0.5, 1.0, 0.0, 0.1));
}

TEST_CASE("plans serialize and re-validate") {
  const std::vector<SamplerPlan> plans = {
      plan_lmc(8, 0.5, 1.0, 0.1),
      plan_lmc_warm(2, 1.0, 1.0, 0.1, {1.0, 1.0}),
      plan_convexified(2, 1.0, 1.0, 0.2),
      plan_lmco(8, 0.5, 1.0, 0.17677669529663687, 0.1),
  };
  for (const SamplerPlan& plan : plans) {
    CAPTURE(lcsamp::algo_name(plan.algo));
    const nlohmann::json j = lcsamp::plan_to_json(plan);
    CHECK(j.at("algo").get<std::string>() == lcsamp::algo_name(plan.algo));
    const SamplerPlan back = lcsamp::plan_from_json(j);
    CHECK(back.algo == plan.algo);
    CHECK(back.T == plan.T);
    CHECK(back.h == plan.h);
    CHECK(back.K == plan.K);
    CHECK(back.eps == plan.eps);
    CHECK(back.predicted_tv == plan.predicted_tv);
    CHECK(back.alpha == plan.alpha);
    CHECK(back.inputs.p == plan.inputs.p);
    CHECK(back.inputs.m == plan.inputs.m);
    CHECK(back.inputs.M == plan.inputs.M);
    CHECK(back.inputs.L_f == plan.inputs.L_f);
    CHECK(back.inputs.chi2 == plan.inputs.chi2);
    CHECK(back.inputs.mu2 == plan.inputs.mu2);
  }
}

TEST_CASE("convexified plans serialize their bounds as barm/barM") {
  const nlohmann::json j =
      lcsamp::plan_to_json(plan_convexified(2, 1.0, 1.5, 0.2));
  CHECK(j.at("inputs").contains("barm"));
  CHECK(j.at("inputs").contains("barM"));
  CHECK(j.at("inputs").at("barM").get<double>() == 1.5);
}

TEST_CASE("plan_from_json rejects tampered or malformed plans") {
  nlohmann::json j = lcsamp::plan_to_json(plan_lmc(8, 0.5, 1.0, 0.1));

  nlohmann::json tampered = j;
  tampered["K"] = tampered["K"].get<long long>() - 5;
  CHECK_THROWS_WITH_SUBSTR(lcsamp::plan_from_json(tampered),
                           lcsamp::domain_error, "inconsistent");

  nlohmann::json missing = j;
  missing.erase("h");
  CHECK_THROWS_WITH_SUBSTR(lcsamp::plan_from_json(missing),
                           lcsamp::domain_error, "malformed");

  nlohmann::json badalgo = j;
  badalgo["algo"] = "metropolis";
  CHECK_THROWS_AS((void)lcsamp::plan_from_json(badalgo), lcsamp::domain_error);

  nlohmann::json badeps = j;
  badeps["eps"] = 0.7;
  CHECK_THROWS_AS((void)lcsamp::plan_from_json(badeps), lcsamp::domain_error);
}
