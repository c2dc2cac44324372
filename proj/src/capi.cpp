#include "lcsamp.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "lcsamp/diagnostics.hpp"
#include "lcsamp/errors.hpp"
#include "lcsamp/logistic.hpp"
#include "lcsamp/mixture.hpp"
#include "lcsamp/model.hpp"
#include "lcsamp/plan.hpp"
#include "lcsamp/rng.hpp"
#include "lcsamp/sample_set.hpp"
#include "lcsamp/sampler.hpp"
#include "lcsamp/transforms.hpp"

struct lcs_model {
  std::shared_ptr<const lcsamp::TargetModel> model;
  lcsamp::ConvexityCertificate cert;
  lcsamp::Vec theta_star;  // in the model's sampling coordinates
  std::string kind;        // "mixture", "logistic", "logistic+convexified"
  lcsamp::Vec mixture_a;
  std::shared_ptr<const lcsamp::LogisticModel> logistic;
  std::shared_ptr<const lcsamp::LogisticData> data;
  nlohmann::json data_meta;
  double gamma = 0.0;  // convexified models only
  double mu_R = 0.0;
};

struct lcs_plan {
  lcsamp::SamplerPlan plan;
};

struct lcs_samples {
  lcsamp::SampleSet set;
};

namespace {

thread_local std::string g_last_error;

lcs_status fail(lcs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

lcs_status fail_null(const char* what) {
  return fail(LCS_ERR_INVALID, std::string(what) + " must not be NULL");
}

/// Translates the in-flight exception into a status code.
lcs_status from_current() {
  try {
    throw;
  } catch (const lcsamp::infeasible_error& e) {
    return fail(LCS_ERR_INFEASIBLE, e.what());
  } catch (const lcsamp::io_error& e) {
    return fail(LCS_ERR_IO, e.what());
  } catch (const lcsamp::divergence_error& e) {
    return fail(LCS_ERR_RUNTIME, e.what());
  } catch (const lcsamp::convergence_error& e) {
    return fail(LCS_ERR_RUNTIME, e.what());
  } catch (const lcsamp::domain_error& e) {
    return fail(LCS_ERR_INFEASIBLE, e.what());
  } catch (const std::exception& e) {
    return fail(LCS_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(LCS_ERR_RUNTIME, "unknown error");
  }
}

#define LCS_GUARD_BEGIN try {
#define LCS_GUARD_END          \
  }                            \
  catch (...) {                \
    return from_current();     \
  }

/// Model provenance embedded into sample sidecars so every artifact
/// records how to regenerate its target.
nlohmann::json model_config_json(const lcs_model& model) {
  if (!model.data_meta.is_null()) return model.data_meta;
  if (model.kind == "mixture") {
    return nlohmann::json{
        {"a", std::vector<double>(model.mixture_a.data(),
                                  model.mixture_a.data() + model.mixture_a.size())}};
  }
  return nullptr;
}

/// Shared tail of the logistic constructors.
lcs_model* build_logistic(std::shared_ptr<const lcsamp::LogisticData> data,
                          double lambda, nlohmann::json meta) {
  const int p = static_cast<int>(data->X.cols());
  if (lambda <= 0.0) lambda = lcsamp::default_lambda(p);
  auto lm = std::make_shared<lcsamp::LogisticModel>(
      lcsamp::logistic_model(*data, lambda));
  const lcsamp::StationaryPoint mode = lcsamp::minimize_gd(
      *lm->g, lm->cert, lcsamp::Vec::Zero(p), 1e-10);

  auto* handle = new lcs_model();
  handle->model = lm->g;
  handle->cert = lm->cert;
  handle->theta_star = mode.theta_star;
  handle->kind = "logistic";
  handle->logistic = std::move(lm);
  handle->data = std::move(data);
  meta["lambda"] = lambda;
  handle->data_meta = std::move(meta);
  return handle;
}

}  // namespace

extern "C" {

const char* lcs_last_error(void) { return g_last_error.c_str(); }

lcs_status lcs_model_mixture(const double* a, int p, lcs_model** out) {
  if (!a) return fail_null("a");
  if (!out) return fail_null("out");
  if (p < 1) return fail(LCS_ERR_INVALID, "p must be >= 1");
  LCS_GUARD_BEGIN
  lcsamp::Vec av = Eigen::Map<const lcsamp::Vec>(a, p);
  auto handle = std::make_unique<lcs_model>();
  handle->model = std::make_shared<lcsamp::GaussianMixtureTarget>(av);
  handle->cert = lcsamp::mixture_certificate(av);
  handle->theta_star = lcsamp::mixture_cstar(av) * av;
  handle->kind = "mixture";
  handle->mixture_a = std::move(av);
  *out = handle.release();
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_model_logistic_csv(const char* x_path, const char* y_path,
                                  double lambda, lcs_model** out) {
  if (!x_path) return fail_null("x_path");
  if (!y_path) return fail_null("y_path");
  if (!out) return fail_null("out");
  LCS_GUARD_BEGIN
  auto data = std::make_shared<lcsamp::LogisticData>(
      lcsamp::read_logistic_csv(x_path, y_path));
  nlohmann::json meta{{"x_path", x_path}, {"y_path", y_path}};
  *out = build_logistic(std::move(data), lambda, std::move(meta));
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_model_logistic_generate(int p, long long n, uint64_t seed,
                                       double lambda, lcs_model** out) {
  if (!out) return fail_null("out");
  LCS_GUARD_BEGIN
  lcsamp::LogisticGenConfig cfg;
  cfg.p = p;
  cfg.n = n;
  cfg.seed = seed;
  auto data = std::make_shared<lcsamp::LogisticData>(lcsamp::logistic_generate(cfg));
  nlohmann::json meta{{"p", p},
                      {"n", n},
                      {"seed", seed},
                      {"theta_true", "all-ones"},
                      {"design", "+-1/sqrt(p) entries"}};
  *out = build_logistic(std::move(data), lambda, std::move(meta));
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_logistic_save_csv(const lcs_model* model, const char* x_path,
                                 const char* y_path) {
  if (!model) return fail_null("model");
  if (!x_path) return fail_null("x_path");
  if (!y_path) return fail_null("y_path");
  if (!model->data) {
    return fail(LCS_ERR_INVALID, "model carries no logistic dataset");
  }
  LCS_GUARD_BEGIN
  lcsamp::write_logistic_csv(*model->data, x_path, y_path, model->data_meta);
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_model_dim(const lcs_model* model, int* p) {
  if (!model) return fail_null("model");
  if (!p) return fail_null("p");
  *p = model->model->dim();
  return LCS_OK;
}

lcs_status lcs_model_certificate(const lcs_model* model, double* m, double* M,
                                 double* L_f) {
  if (!model) return fail_null("model");
  if (m) *m = model->cert.m;
  if (M) *M = model->cert.M;
  if (L_f) *L_f = model->cert.L_f.value_or(-1.0);
  return LCS_OK;
}

lcs_status lcs_model_stationary_point(const lcs_model* model, double* buf,
                                      int len) {
  if (!model) return fail_null("model");
  if (!buf) return fail_null("buf");
  if (len != model->model->dim()) {
    return fail(LCS_ERR_INVALID, "buffer length does not match the dimension");
  }
  Eigen::Map<lcsamp::Vec>(buf, len) = model->theta_star;
  return LCS_OK;
}

lcs_status lcs_logistic_optimal_R(const lcs_model* model, double eps,
                                  double* R, double* barm, double* gamma,
                                  double* mu_R, double* m_2R) {
  if (!model) return fail_null("model");
  if (!model->logistic || model->kind != "logistic") {
    return fail(LCS_ERR_INVALID, "the radius search needs a plain logistic model");
  }
  LCS_GUARD_BEGIN
  const lcsamp::ConvexifyChoice choice =
      lcsamp::logistic_optimal_R(*model->logistic, model->theta_star, eps);
  if (R) *R = choice.R;
  if (barm) *barm = choice.barm;
  if (gamma) *gamma = choice.gamma;
  if (mu_R) *mu_R = choice.mu_R;
  if (m_2R) *m_2R = choice.m_2R;
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_model_convexify_auto(const lcs_model* model, double eps,
                                    lcs_model** out) {
  if (!model) return fail_null("model");
  if (!out) return fail_null("out");
  if (!model->logistic || model->kind != "logistic") {
    return fail(LCS_ERR_INVALID, "convexification needs a plain logistic model");
  }
  LCS_GUARD_BEGIN
  const lcsamp::ConvexifyChoice choice =
      lcsamp::logistic_optimal_R(*model->logistic, model->theta_star, eps);
  lcsamp::ConvexifySpec spec;
  spec.x0 = model->theta_star;
  spec.R = choice.R;
  spec.gamma = choice.gamma;
  spec.mu_R = choice.mu_R;
  spec.m_inf = model->logistic->lambda;
  spec.m_profile = [lm = model->logistic, ys = model->theta_star](double r) {
    return lcsamp::logistic_m_R(*lm, ys, r);
  };
  lcsamp::TransformedModel conv =
      lcsamp::convexify(model->model, model->cert, spec);

  auto handle = std::make_unique<lcs_model>();
  handle->model = std::move(conv.model);
  handle->cert = conv.cert;
  handle->theta_star = model->theta_star;
  handle->kind = "logistic+convexified";
  handle->logistic = model->logistic;
  handle->data = model->data;
  handle->data_meta = model->data_meta;
  handle->gamma = choice.gamma;
  handle->mu_R = choice.mu_R;
  *out = handle.release();
  return LCS_OK;
  LCS_GUARD_END
}

void lcs_model_free(lcs_model* model) { delete model; }

lcs_status lcs_plan_lmc(int p, double m, double M, double eps, lcs_plan** out) {
  if (!out) return fail_null("out");
  if (p < 1) return fail(LCS_ERR_INVALID, "p must be >= 1");
  LCS_GUARD_BEGIN
  *out = new lcs_plan{lcsamp::plan_lmc(p, m, M, eps)};
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_plan_lmc_warm(int p, double m, double M, double eps,
                             double chi2, double mu2, lcs_plan** out) {
  if (!out) return fail_null("out");
  if (p < 1) return fail(LCS_ERR_INVALID, "p must be >= 1");
  LCS_GUARD_BEGIN
  lcsamp::WarmStartSpec warm;
  warm.chi2_bound = chi2;
  warm.mu2 = mu2;
  *out = new lcs_plan{lcsamp::plan_lmc_warm(p, m, M, eps, warm)};
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_plan_lmco(int p, double m, double M, double L_f, double eps,
                         lcs_plan** out) {
  if (!out) return fail_null("out");
  if (p < 1) return fail(LCS_ERR_INVALID, "p must be >= 1");
  LCS_GUARD_BEGIN
  *out = new lcs_plan{lcsamp::plan_lmco(p, m, M, L_f, eps)};
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_plan_convexified(int p, double barm, double barM, double eps,
                                lcs_plan** out) {
  if (!out) return fail_null("out");
  if (p < 1) return fail(LCS_ERR_INVALID, "p must be >= 1");
  LCS_GUARD_BEGIN
  *out = new lcs_plan{lcsamp::plan_convexified(p, barm, barM, eps)};
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_plan_get(const lcs_plan* plan, double* T, double* h,
                        long long* K, double* alpha, double* eps,
                        double* predicted_tv) {
  if (!plan) return fail_null("plan");
  if (T) *T = plan->plan.T;
  if (h) *h = plan->plan.h;
  if (K) *K = plan->plan.K;
  if (alpha) *alpha = plan->plan.alpha.value_or(-1.0);
  if (eps) *eps = plan->plan.eps;
  if (predicted_tv) *predicted_tv = plan->plan.predicted_tv;
  return LCS_OK;
}

lcs_status lcs_plan_to_json(const lcs_plan* plan, char* buf, size_t* len) {
  if (!plan) return fail_null("plan");
  if (!len) return fail_null("len");
  LCS_GUARD_BEGIN
  const std::string s = lcsamp::plan_to_json(plan->plan).dump(2);
  const size_t needed = s.size() + 1;
  if (!buf) {
    *len = needed;
    return LCS_OK;
  }
  if (*len < needed) {
    *len = needed;
    return fail(LCS_ERR_INVALID, "buffer too small for plan JSON");
  }
  std::memcpy(buf, s.c_str(), needed);
  *len = needed;
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_plan_from_json(const char* json, lcs_plan** out) {
  if (!json) return fail_null("json");
  if (!out) return fail_null("out");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    return fail(LCS_ERR_INVALID, std::string("plan JSON does not parse: ") + e.what());
  }
  LCS_GUARD_BEGIN
  *out = new lcs_plan{lcsamp::plan_from_json(doc)};
  return LCS_OK;
  LCS_GUARD_END
}

void lcs_plan_free(lcs_plan* plan) { delete plan; }

lcs_status lcs_run_ensemble(const lcs_model* model, const lcs_plan* plan,
                            int algo_override, long long n_chains,
                            uint64_t seed, int n_threads, lcs_samples** out) {
  if (!model) return fail_null("model");
  if (!plan) return fail_null("plan");
  if (!out) return fail_null("out");
  if (n_chains < 1) return fail(LCS_ERR_INVALID, "n_chains must be >= 1");
  LCS_GUARD_BEGIN
  lcsamp::RunConfig config;
  config.n_chains = n_chains;
  config.seed = seed;
  config.n_threads = n_threads;
  switch (algo_override) {
    case LCS_ALGO_FROM_PLAN:
      config.algo = lcsamp::step_kind_for(plan->plan.algo);
      break;
    case LCS_ALGO_LMC:
      config.algo = lcsamp::StepKind::lmc;
      break;
    case LCS_ALGO_LMCO:
      config.algo = lcsamp::StepKind::lmco;
      break;
    case LCS_ALGO_LMCO2:
      config.algo = lcsamp::StepKind::lmco2;
      break;
    default:
      return fail(LCS_ERR_INVALID, "unknown algorithm override");
  }
  const lcsamp::InitSpec init =
      lcsamp::InitSpec::gaussian(model->theta_star, model->cert.M);
  auto samples = std::make_unique<lcs_samples>();
  samples->set = lcsamp::run_ensemble(*model->model, plan->plan, init, config);
  samples->set.meta["model_config"] = model_config_json(*model);
  *out = samples.release();
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_mixture_direct_sample(const lcs_model* model, long long n,
                                     uint64_t seed, lcs_samples** out) {
  if (!model) return fail_null("model");
  if (!out) return fail_null("out");
  if (model->kind != "mixture") {
    return fail(LCS_ERR_INVALID, "direct sampling is defined for mixture models");
  }
  if (n < 1) return fail(LCS_ERR_INVALID, "n must be >= 1");
  LCS_GUARD_BEGIN
  auto samples = std::make_unique<lcs_samples>();
  const int p = model->model->dim();
  samples->set.data.resize(n, p);
  lcsamp::Rng rng(seed);
  for (long long i = 0; i < n; ++i) {
    samples->set.data.row(i) =
        lcsamp::mixture_direct_sample(model->mixture_a, rng).transpose();
  }
  samples->set.meta = nlohmann::json{{"seed", seed},
                                     {"N", n},
                                     {"model", model->model->tag()},
                                     {"algo", "direct"},
                                     {"plan", nullptr},
                                     {"model_config", model_config_json(*model)}};
  *out = samples.release();
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_samples_shape(const lcs_samples* samples, long long* n, int* p) {
  if (!samples) return fail_null("samples");
  if (n) *n = samples->set.n();
  if (p) *p = samples->set.p();
  return LCS_OK;
}

lcs_status lcs_samples_get(const lcs_samples* samples, long long i, int j,
                           double* value) {
  if (!samples) return fail_null("samples");
  if (!value) return fail_null("value");
  if (i < 0 || i >= samples->set.n() || j < 0 || j >= samples->set.p()) {
    return fail(LCS_ERR_INVALID, "sample index out of range");
  }
  *value = samples->set.data(i, j);
  return LCS_OK;
}

lcs_status lcs_samples_write_csv(const lcs_samples* samples, const char* path) {
  if (!samples) return fail_null("samples");
  if (!path) return fail_null("path");
  LCS_GUARD_BEGIN
  lcsamp::write_sample_csv(samples->set, path);
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_samples_read_csv(const char* path, lcs_samples** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  LCS_GUARD_BEGIN
  auto samples = std::make_unique<lcs_samples>();
  samples->set = lcsamp::read_sample_csv(path);
  *out = samples.release();
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_samples_map_back(const lcs_samples* samples,
                                const lcs_model* model, lcs_samples** out) {
  if (!samples) return fail_null("samples");
  if (!model) return fail_null("model");
  if (!out) return fail_null("out");
  if (!model->logistic) {
    return fail(LCS_ERR_INVALID, "model carries no preconditioner to map back");
  }
  LCS_GUARD_BEGIN
  auto mapped = std::make_unique<lcs_samples>();
  mapped->set = lcsamp::map_back(samples->set,
                                 lcsamp::Preconditioner{model->logistic->A});
  *out = mapped.release();
  return LCS_OK;
  LCS_GUARD_END
}

void lcs_samples_free(lcs_samples* samples) { delete samples; }

lcs_status lcs_ks_mixture_projection(const lcs_samples* samples,
                                     const lcs_model* model,
                                     const double* direction, double* ks) {
  if (!samples) return fail_null("samples");
  if (!model) return fail_null("model");
  if (!direction) return fail_null("direction");
  if (!ks) return fail_null("ks");
  if (model->kind != "mixture") {
    return fail(LCS_ERR_INVALID, "the analytic projection law is for mixture models");
  }
  LCS_GUARD_BEGIN
  const int p = model->model->dim();
  const lcsamp::Vec dir = Eigen::Map<const lcsamp::Vec>(direction, p);
  const lcsamp::Vec proj = lcsamp::project(samples->set.data, dir);
  const double shift = dir.dot(model->mixture_a);
  *ks = lcsamp::ks_distance(proj, [shift](double t) {
    return lcsamp::mixture_projection_cdf(t, shift);
  });
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_marginal_distances(const lcs_samples* a, const lcs_samples* b,
                                  double* mean, double* median, double* q1,
                                  double* q3) {
  if (!a) return fail_null("a");
  if (!b) return fail_null("b");
  LCS_GUARD_BEGIN
  const lcsamp::MarginalDistances d =
      lcsamp::marginal_distances(a->set.data, b->set.data);
  if (mean) *mean = d.mean;
  if (median) *median = d.median;
  if (q1) *q1 = d.q1;
  if (q3) *q3 = d.q3;
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_moment_check_mixture(const lcs_samples* samples,
                                    const lcs_model* model,
                                    long long* mean_flags,
                                    long long* cov_flags,
                                    double* worst_mean_ratio,
                                    double* worst_cov_ratio) {
  if (!samples) return fail_null("samples");
  if (!model) return fail_null("model");
  if (model->kind != "mixture") {
    return fail(LCS_ERR_INVALID, "analytic moments are available for mixture models");
  }
  LCS_GUARD_BEGIN
  const int p = model->model->dim();
  const lcsamp::Vec mean_ref = lcsamp::Vec::Zero(p);
  const lcsamp::Mat cov_ref =
      lcsamp::Mat::Identity(p, p) +
      model->mixture_a * model->mixture_a.transpose();
  const lcsamp::MomentReport report =
      lcsamp::moment_check(samples->set.data, mean_ref, cov_ref);
  if (mean_flags) *mean_flags = report.mean_flags;
  if (cov_flags) *cov_flags = report.cov_flags;
  if (worst_mean_ratio) *worst_mean_ratio = report.worst_mean_ratio;
  if (worst_cov_ratio) *worst_cov_ratio = report.worst_cov_ratio;
  return LCS_OK;
  LCS_GUARD_END
}

lcs_status lcs_energy_check(const lcs_samples* samples,
                            const lcs_model* model, double* empirical,
                            double* se, double* bound, int* pass) {
  if (!samples) return fail_null("samples");
  if (!model) return fail_null("model");
  LCS_GUARD_BEGIN
  const double m = model->cert.m;
  const double M = model->cert.M;
  const double p = static_cast<double>(model->model->dim());
  const double limit = (M / m) * (p / M) + 2.0 * M * p / (m * m);
  const lcsamp::EnergyReport report =
      lcsamp::energy_bound_check(samples->set.data, model->theta_star, limit);
  if (empirical) *empirical = report.empirical;
  if (se) *se = report.se;
  if (bound) *bound = report.bound;
  if (pass) *pass = report.pass ? 1 : 0;
  return LCS_OK;
  LCS_GUARD_END
}

}  // extern "C"
