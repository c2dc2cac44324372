#include "lcsamp/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <Eigen/Dense>

namespace lcsamp {

namespace {

const char* kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::lmc: return "LMC";
    case StepKind::lmco: return "LMCO";
    case StepKind::lmco2: return "LMCO2";
  }
  return "?";
}

void fill_normal(Vec& xi, std::normal_distribution<double>& nd, Rng& rng) {
  for (Eigen::Index j = 0; j < xi.size(); ++j) xi[j] = nd(rng);
}

/// Applies one exponential-integrator step given a structured Hessian.
void lmco_apply_structured(const StructuredHessian& sh, const Vec& g,
                           const Vec& xi, double h, Vec& x) {
  if (!(sh.background > 0.0) ||
      (sh.direction.size() > 0 && !(sh.dir_eigenvalue > 0.0))) {
    throw domain_error("lmco_step: Hessian eigenvalue <= 0; target not strongly convex here");
  }
  const double m_bg = ozaki_m_coeff(sh.background, h);
  const double s_bg = std::sqrt(ozaki_s_coeff(sh.background, h));
  if (sh.direction.size() == 0) {
    x += -m_bg * g + s_bg * xi;
    return;
  }
  const double m_dir = ozaki_m_coeff(sh.dir_eigenvalue, h);
  const double s_dir = std::sqrt(ozaki_s_coeff(sh.dir_eigenvalue, h));
  const double gu = sh.direction.dot(g);
  const double xu = sh.direction.dot(xi);
  x += -m_bg * g + s_bg * xi +
       ((m_bg - m_dir) * gu + (s_dir - s_bg) * xu) * sh.direction;
}

/// Applies one exponential-integrator step via a dense eigendecomposition.
void lmco_apply_dense(const TargetModel& model, const Vec& g, const Vec& xi,
                      double h, Vec& x, Mat& hess) {
  model.hessian(x, hess);
  const OzakiOperators ops = ozaki_operators(hess, h);
  const Vec a = ops.eigvecs.transpose() * g;
  const Vec b = ops.eigvecs.transpose() * xi;
  x += ops.eigvecs * (ops.s_coeffs.cwiseSqrt().cwiseProduct(b) -
                      ops.m_coeffs.cwiseProduct(a));
}

/// Shared chain driver; all public entry points funnel here.
class ChainRunner {
 public:
  ChainRunner(const TargetModel& model, double h, StepKind kind)
      : model_(model),
        h_(h),
        sqrt2h_(std::sqrt(2.0 * h)),
        kind_(kind),
        grad_(model.dim()),
        xi_(model.dim()),
        work_(model.dim()) {
    if (kind != StepKind::lmc) {
      const bool has_any = model.has_hessian() || model.has_structured_hessian();
      if (!has_any) {
        throw capability_error(std::string(kind_name(kind)) +
                               " requires a model Hessian");
      }
      if (kind == StepKind::lmco && !model.supports_lmco()) {
        throw domain_error(
            "LMCO disabled for model '" + model.tag() +
            "': its Hessian is not continuous everywhere (run LMC instead)");
      }
      structured_ = model.has_structured_hessian();
      if (kind == StepKind::lmco && !structured_) {
        hess_.resize(model.dim(), model.dim());
      }
    }
  }

  void step(Vec& x, std::normal_distribution<double>& nd, Rng& rng) {
    model_.gradient(x, grad_);
    fill_normal(xi_, nd, rng);
    switch (kind_) {
      case StepKind::lmc:
        x = x - h_ * grad_ + sqrt2h_ * xi_;
        break;
      case StepKind::lmco:
        if (structured_) {
          lmco_apply_structured(model_.structured_hessian(x), grad_, xi_, h_, x);
        } else {
          lmco_apply_dense(model_, grad_, xi_, h_, x, hess_);
        }
        break;
      case StepKind::lmco2:
        work_ = -h_ * grad_ + sqrt2h_ * xi_;
        model_.hessian_vec(x, work_, grad_);  // grad_ reused as H*work
        x += work_ - 0.5 * h_ * grad_;
        break;
    }
  }

 private:
  const TargetModel& model_;
  double h_;
  double sqrt2h_;
  StepKind kind_;
  bool structured_ = false;
  Vec grad_, xi_, work_;
  Mat hess_;
};

Vec run_chain_with_rng(const TargetModel& model, const SamplerPlan& plan,
                       const Vec& x0, Rng& rng, StepKind kind, Mat* trajectory,
                       long long chain_index) {
  if (x0.size() != model.dim()) {
    throw domain_error("run_chain: x0 has wrong dimension");
  }
  if (!x0.allFinite()) {
    throw divergence_error("run_chain: start point is non-finite", chain_index, 0);
  }
  if (plan.K > 0 && !(plan.h > 0.0 && std::isfinite(plan.h))) {
    throw domain_error("run_chain: plan has no positive step size");
  }

  Vec x = x0;
  if (trajectory) {
    trajectory->resize(plan.K + 1, model.dim());
    trajectory->row(0) = x;
  }
  if (plan.K == 0) return x;

  ChainRunner runner(model, plan.h, kind);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (long long k = 0; k < plan.K; ++k) {
    runner.step(x, nd, rng);
    if (!x.allFinite()) {
      throw divergence_error(
          "chain state became non-finite at step " + std::to_string(k + 1) +
              " of " + std::to_string(plan.K) + " (" + kind_name(kind) +
              ", h = " + std::to_string(plan.h) + ")",
          chain_index, k + 1);
    }
    if (trajectory) trajectory->row(k + 1) = x;
  }
  return x;
}

Vec draw_init(const InitSpec& init, Rng& rng) {
  if (init.kind == InitSpec::Kind::fixed) return init.center;
  return init_gaussian(init.center, init.M, rng);
}

}  // namespace

Vec init_gaussian(const Vec& theta_star, double M, Rng& rng) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw domain_error("init_gaussian: requires M > 0");
  }
  std::normal_distribution<double> nd(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(M);
  Vec x(theta_star.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    x[j] = theta_star[j] + scale * nd(rng);
  }
  return x;
}

double ozaki_m_coeff(double lambda, double h) {
  const double z = h * lambda;
  if (std::fabs(z) < 1e-4) {
    return h * (1.0 - 0.5 * z + z * z / 6.0);
  }
  return (1.0 - std::exp(-z)) / lambda;
}

double ozaki_s_coeff(double lambda, double h) {
  const double z = h * lambda;
  if (std::fabs(z) < 1e-4) {
    return 2.0 * h * (1.0 - z + (2.0 / 3.0) * z * z);
  }
  return (1.0 - std::exp(-2.0 * z)) / lambda;
}

OzakiOperators ozaki_operators(const Mat& hessian, double h) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0) {
    throw domain_error("ozaki_operators: Hessian must be square and non-empty");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw domain_error("ozaki_operators: requires h > 0");
  }
  if (!hessian.allFinite()) {
    throw domain_error("ozaki_operators: Hessian has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hessian);
  if (es.info() != Eigen::Success) {
    throw domain_error("ozaki_operators: eigendecomposition failed");
  }
  OzakiOperators ops;
  ops.eigvals = es.eigenvalues();
  ops.eigvecs = es.eigenvectors();
  const Eigen::Index p = ops.eigvals.size();
  ops.m_coeffs.resize(p);
  ops.s_coeffs.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double lam = ops.eigvals[i];
    if (!(lam > 0.0)) {
      throw domain_error("ozaki_operators: Hessian eigenvalue " +
                         std::to_string(lam) + " is not positive");
    }
    ops.m_coeffs[i] = ozaki_m_coeff(lam, h);
    ops.s_coeffs[i] = ozaki_s_coeff(lam, h);
  }
  return ops;
}

namespace {

Vec checked_gradient(const TargetModel& model, const Vec& x) {
  if (x.size() != model.dim()) throw domain_error("step: x has wrong dimension");
  Vec g = model.gradient(x);
  if (!g.allFinite()) {
    throw divergence_error("step: gradient non-finite at the current state", -1, -1);
  }
  return g;
}

void check_step_args(const Vec& x, double h, const Vec& xi) {
  if (!(h > 0.0) || !std::isfinite(h)) throw domain_error("step: requires h > 0");
  if (xi.size() != x.size()) throw domain_error("step: noise has wrong dimension");
}

}  // namespace

Vec lmc_step(const TargetModel& model, const Vec& x, double h, const Vec& xi) {
  check_step_args(x, h, xi);
  const Vec g = checked_gradient(model, x);
  return x - h * g + std::sqrt(2.0 * h) * xi;
}

Vec lmc_step(const TargetModel& model, const Vec& x, double h, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec xi(x.size());
  fill_normal(xi, nd, rng);
  return lmc_step(model, x, h, xi);
}

Vec lmco_step(const TargetModel& model, const Vec& x, double h, const Vec& xi) {
  check_step_args(x, h, xi);
  if (!model.supports_lmco()) {
    throw domain_error("lmco_step: disabled for model '" + model.tag() +
                       "' (Hessian not continuous everywhere)");
  }
  const Vec g = checked_gradient(model, x);
  Vec out = x;
  if (model.has_structured_hessian()) {
    lmco_apply_structured(model.structured_hessian(x), g, xi, h, out);
  } else {
    Mat hess(model.dim(), model.dim());
    lmco_apply_dense(model, g, xi, h, out, hess);
  }
  return out;
}

Vec lmco_step(const TargetModel& model, const Vec& x, double h, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec xi(x.size());
  fill_normal(xi, nd, rng);
  return lmco_step(model, x, h, xi);
}

Vec lmco2_step(const TargetModel& model, const Vec& x, double h, const Vec& xi) {
  check_step_args(x, h, xi);
  if (!model.has_hessian() && !model.has_structured_hessian()) {
    throw capability_error("lmco2_step: model provides no Hessian-vector product");
  }
  const Vec g = checked_gradient(model, x);
  const Vec v = -h * g + std::sqrt(2.0 * h) * xi;
  Vec hv(x.size());
  model.hessian_vec(x, v, hv);
  return x + v - 0.5 * h * hv;
}

Vec lmco2_step(const TargetModel& model, const Vec& x, double h, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec xi(x.size());
  fill_normal(xi, nd, rng);
  return lmco2_step(model, x, h, xi);
}

StepKind step_kind_for(Algo algo) {
  switch (algo) {
    case Algo::lmco: return StepKind::lmco;
    case Algo::lmco2: return StepKind::lmco2;
    default: return StepKind::lmc;
  }
}

Vec run_chain(const TargetModel& model, const SamplerPlan& plan, const Vec& x0,
              std::uint64_t seed, std::optional<StepKind> kind, Mat* trajectory) {
  Rng rng(seed);
  return run_chain_with_rng(model, plan, x0, rng,
                            kind.value_or(step_kind_for(plan.algo)), trajectory,
                            -1);
}

SampleSet run_ensemble(const TargetModel& model, const SamplerPlan& plan,
                       const InitSpec& init, const RunConfig& config,
                       std::vector<Mat>* trajectories) {
  const long long n = config.n_chains;
  if (n < 1) throw domain_error("run_ensemble: n_chains must be >= 1");
  if (init.center.size() != model.dim()) {
    throw domain_error("run_ensemble: init center has wrong dimension");
  }
  if (init.kind == InitSpec::Kind::gaussian && !(init.M > 0.0)) {
    throw domain_error("run_ensemble: gaussian init requires M > 0");
  }
  if (config.record_trajectory) {
    if (!trajectories) {
      throw domain_error("run_ensemble: record_trajectory set but no trajectory sink given");
    }
    const double total = static_cast<double>(n) * (plan.K + 1) * model.dim();
    if (total > 2.5e8) {
      throw domain_error(
          "run_ensemble: trajectory recording would hold > 2.5e8 values; "
          "record single chains instead");
    }
    trajectories->assign(static_cast<std::size_t>(n), Mat());
  }

  const auto t0 = std::chrono::steady_clock::now();
  SampleSet set;
  set.data.resize(n, model.dim());

  int n_threads = config.n_threads > 0
                      ? config.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = static_cast<int>(std::min<long long>(n_threads, n));

  struct Failure {
    long long chain;
    long long step;
    std::string what;
    bool is_divergence;
    std::exception_ptr ep;
  };
  std::mutex mu;
  std::vector<Failure> failures;
  std::atomic<long long> next{0};

  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        Rng rng(chain_seed(config.seed, static_cast<std::uint64_t>(i)));
        const Vec x0 = draw_init(init, rng);
        Mat* traj = config.record_trajectory
                        ? &(*trajectories)[static_cast<std::size_t>(i)]
                        : nullptr;
        set.data.row(i) = run_chain_with_rng(
            model, plan, x0, rng, config.algo, traj, i);
      } catch (const divergence_error& e) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back({i, e.step, e.what(), true, nullptr});
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back({i, -1, "", false, std::current_exception()});
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!failures.empty()) {
    auto first = std::min_element(
        failures.begin(), failures.end(),
        [](const Failure& a, const Failure& b) { return a.chain < b.chain; });
    if (!first->is_divergence) std::rethrow_exception(first->ep);
    throw divergence_error("chain " + std::to_string(first->chain) + " of " +
                               std::to_string(n) + " diverged: " + first->what,
                           first->chain, first->step);
  }

  const auto t1 = std::chrono::steady_clock::now();
  nlohmann::json plan_json = plan_to_json(plan);
  if (config.algo == StepKind::lmco2) {
    plan_json["predicted_tv"] = nullptr;  // no certified budget for this run
  }
  set.meta = nlohmann::json{
      {"seed", config.seed},
      {"N", n},
      {"model", model.tag()},
      {"algo", kind_name(config.algo)},
      {"plan", std::move(plan_json)},
      {"wall_time_s", std::chrono::duration<double>(t1 - t0).count()},
  };
  return set;
}

}  // namespace lcsamp
