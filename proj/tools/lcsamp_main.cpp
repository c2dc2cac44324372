// Command-line front end for the lcsamp library.  Everything goes
// through the public C interface; reports are JSON on stdout.
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "lcsamp.h"

namespace {

using nlohmann::json;

int exit_code(lcs_status status) {
  switch (status) {
    case LCS_OK:
      return 0;
    case LCS_ERR_INVALID:
      return 2;
    case LCS_ERR_INFEASIBLE:
      return 3;
    case LCS_ERR_RUNTIME:
      return 4;
    case LCS_ERR_IO:
      return 2;
  }
  return 2;
}

void check(lcs_status status) {
  if (status != LCS_OK) {
    std::cerr << "error: " << lcs_last_error() << "\n";
    std::exit(exit_code(status));
  }
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(2);
}

using ModelPtr = std::unique_ptr<lcs_model, decltype(&lcs_model_free)>;
using PlanPtr = std::unique_ptr<lcs_plan, decltype(&lcs_plan_free)>;
using SamplesPtr = std::unique_ptr<lcs_samples, decltype(&lcs_samples_free)>;

ModelPtr own(lcs_model* m) { return ModelPtr(m, &lcs_model_free); }
PlanPtr own(lcs_plan* p) { return PlanPtr(p, &lcs_plan_free); }
SamplesPtr own(lcs_samples* s) { return SamplesPtr(s, &lcs_samples_free); }

void apply_cl_seed(std::uint64_t* seed) {
  const char* env = std::getenv("CL_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') usage_error("CL_SEED is not an unsigned integer");
  *seed = v;
}

/// SplitMix-style avalanche so derived seeds never collide by simple
/// arithmetic on the base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string plan_json_string(const lcs_plan* plan) {
  size_t len = 0;
  check(lcs_plan_to_json(plan, nullptr, &len));
  std::string buf(len, '\0');
  check(lcs_plan_to_json(plan, buf.data(), &len));
  buf.resize(len - 1);
  return buf;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) usage_error("cannot open " + out_path);
  f << report.dump(2) << "\n";
}

struct PlanArgs {
  std::string algo;
  int p = 0;
  double m = 0, M = 0, eps = 0;
  double Lf = -1.0;
  double chi2 = 1.0, mu2 = 1.0;
};

int run_plan(const PlanArgs& a) {
  lcs_plan* plan = nullptr;
  if (a.algo == "lmc") {
    check(lcs_plan_lmc(a.p, a.m, a.M, a.eps, &plan));
  } else if (a.algo == "lmc-warm") {
    check(lcs_plan_lmc_warm(a.p, a.m, a.M, a.eps, a.chi2, a.mu2, &plan));
  } else if (a.algo == "lmco") {
    if (a.Lf < 0.0) usage_error("--Lf is required for --algo lmco");
    check(lcs_plan_lmco(a.p, a.m, a.M, a.Lf, a.eps, &plan));
  } else if (a.algo == "lmc-convexified") {
    check(lcs_plan_convexified(a.p, a.m, a.M, a.eps, &plan));
  } else {
    usage_error("unknown --algo " + a.algo);
  }
  auto guard = own(plan);
  std::cout << plan_json_string(plan) << "\n";
  return 0;
}

struct SampleArgs {
  std::string target;
  std::vector<double> a;
  std::string algo = "lmc";
  double eps = 0.1;
  long long N = 0;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  int p = 0;
  long long n = 0;
  std::uint64_t data_seed = 0;
  double lambda = 0.0;
  std::string x_csv, y_csv;
  bool convexify = false;
  std::string save_data;
};

ModelPtr build_sample_model(const SampleArgs& a) {
  lcs_model* model = nullptr;
  if (a.target == "mixture" || a.target == "direct-mixture") {
    if (a.a.empty()) usage_error("--a is required for mixture targets");
    check(lcs_model_mixture(a.a.data(), static_cast<int>(a.a.size()), &model));
  } else if (a.target == "logistic") {
    if (!a.x_csv.empty() || !a.y_csv.empty()) {
      if (a.x_csv.empty() || a.y_csv.empty()) {
        usage_error("--x-csv and --y-csv must be given together");
      }
      check(lcs_model_logistic_csv(a.x_csv.c_str(), a.y_csv.c_str(), a.lambda,
                                   &model));
    } else {
      if (a.p <= 0 || a.n <= 0) {
        usage_error("logistic target needs --p and --n (or --x-csv/--y-csv)");
      }
      check(lcs_model_logistic_generate(a.p, a.n, a.data_seed, a.lambda, &model));
    }
  } else {
    usage_error("unknown --target " + a.target);
  }
  return own(model);
}

int run_sample(SampleArgs a) {
  apply_cl_seed(&a.seed);
  if (a.N < 1) usage_error("--N must be >= 1");
  ModelPtr model = build_sample_model(a);

  if (a.target == "direct-mixture") {
    lcs_samples* s = nullptr;
    check(lcs_mixture_direct_sample(model.get(), a.N, a.seed, &s));
    auto samples = own(s);
    check(lcs_samples_write_csv(samples.get(), a.out.c_str()));
    return 0;
  }

  if (!a.save_data.empty()) {
    if (a.target != "logistic") usage_error("--save-data applies to logistic targets");
    check(lcs_logistic_save_csv(model.get(), (a.save_data + "_X.csv").c_str(),
                                (a.save_data + "_y.csv").c_str()));
  }

  ModelPtr sampling_model(nullptr, &lcs_model_free);
  const lcs_model* active = model.get();
  if (a.convexify) {
    if (a.target != "logistic") usage_error("--convexify applies to logistic targets");
    if (a.algo != "lmc") usage_error("--convexify samples with the LMC step");
    lcs_model* conv = nullptr;
    check(lcs_model_convexify_auto(model.get(), a.eps, &conv));
    sampling_model = own(conv);
    active = sampling_model.get();
  }

  int p = 0;
  double m = 0, M = 0, Lf = -1;
  check(lcs_model_dim(active, &p));
  check(lcs_model_certificate(active, &m, &M, &Lf));

  lcs_plan* plan_raw = nullptr;
  int algo_override = LCS_ALGO_FROM_PLAN;
  if (a.convexify) {
    check(lcs_plan_convexified(p, m, M, a.eps, &plan_raw));
  } else if (a.algo == "lmc") {
    check(lcs_plan_lmc(p, m, M, a.eps, &plan_raw));
  } else if (a.algo == "lmco" || a.algo == "lmco2") {
    if (Lf < 0.0) usage_error("target has no Hessian-Lipschitz constant for " + a.algo);
    check(lcs_plan_lmco(p, m, M, Lf, a.eps, &plan_raw));
    if (a.algo == "lmco2") algo_override = LCS_ALGO_LMCO2;
  } else {
    usage_error("unknown --algo " + a.algo + " (expected lmc, lmco or lmco2)");
  }
  auto plan = own(plan_raw);

  lcs_samples* s = nullptr;
  check(lcs_run_ensemble(active, plan.get(), algo_override, a.N, a.seed,
                         a.threads, &s));
  auto samples = own(s);

  if (a.target == "logistic") {
    lcs_samples* mapped = nullptr;
    check(lcs_samples_map_back(samples.get(), active, &mapped));
    samples = own(mapped);
  }
  check(lcs_samples_write_csv(samples.get(), a.out.c_str()));
  return 0;
}

struct Table1Args {
  std::vector<int> p_list;
  double eps = 0.1;
  double m = 0.5;
  double M = 1.0;
  double Lf = 0.17677669529663687;  // |a|^3/2 at |a|^2 = 1/2
  std::string out;
};

int run_table1(const Table1Args& a) {
  std::string csv = "p,algo,K\n";
  for (const int p : a.p_list) {
    lcs_plan* plan = nullptr;
    long long K = 0;
    check(lcs_plan_lmc(p, a.m, a.M, a.eps, &plan));
    check(lcs_plan_get(plan, nullptr, nullptr, &K, nullptr, nullptr, nullptr));
    lcs_plan_free(plan);
    csv += std::to_string(p) + ",LMC," + std::to_string(K) + "\n";

    plan = nullptr;
    check(lcs_plan_lmco(p, a.m, a.M, a.Lf, a.eps, &plan));
    check(lcs_plan_get(plan, nullptr, nullptr, &K, nullptr, nullptr, nullptr));
    lcs_plan_free(plan);
    csv += std::to_string(p) + ",LMCO," + std::to_string(K) + "\n";
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) usage_error("cannot open " + a.out);
    f << csv;
  }
  return 0;
}

struct LogisticKKArgs {
  int p = 0;
  long long n = 0;
  double eps = 0.1;
  int trials = 10;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::string out;
};

int run_logistic_kk(LogisticKKArgs a) {
  apply_cl_seed(&a.seed);
  if (a.trials < 1) usage_error("--trials must be >= 1");
  json rows = json::array();
  double sum_k = 0.0, sum_kp = 0.0;
  for (int t = 0; t < a.trials; ++t) {
    const std::uint64_t dseed = mix_seed(a.seed, static_cast<std::uint64_t>(t));
    lcs_model* raw = nullptr;
    check(lcs_model_logistic_generate(a.p, a.n, dseed, a.lambda, &raw));
    auto model = own(raw);

    double lambda = 0, M = 0;
    check(lcs_model_certificate(model.get(), &lambda, &M, nullptr));

    lcs_plan* plan_raw = nullptr;
    check(lcs_plan_lmc(a.p, lambda, M, a.eps, &plan_raw));
    auto plan = own(plan_raw);
    long long K = 0;
    check(lcs_plan_get(plan.get(), nullptr, nullptr, &K, nullptr, nullptr, nullptr));

    double R = 0, barm = 0, gamma = 0, mu_R = 0, m_2R = 0;
    check(lcs_logistic_optimal_R(model.get(), a.eps, &R, &barm, &gamma, &mu_R,
                                 &m_2R));
    lcs_plan* cplan_raw = nullptr;
    check(lcs_plan_convexified(a.p, barm, M + gamma, a.eps, &cplan_raw));
    auto cplan = own(cplan_raw);
    long long Kp = 0;
    check(lcs_plan_get(cplan.get(), nullptr, nullptr, &Kp, nullptr, nullptr,
                       nullptr));

    sum_k += static_cast<double>(K);
    sum_kp += static_cast<double>(Kp);
    rows.push_back(json{{"dataset_seed", dseed},
                        {"K", K},
                        {"K_prime", Kp},
                        {"R", R},
                        {"barm", barm},
                        {"gamma", gamma},
                        {"mu_R", mu_R}});
  }
  const json report{{"p", a.p},
                    {"n", a.n},
                    {"eps", a.eps},
                    {"seed", a.seed},
                    {"trials", rows},
                    {"mean_K", sum_k / a.trials},
                    {"mean_K_prime", sum_kp / a.trials}};
  emit(report, a.out);
  return 0;
}

struct DiagnoseArgs {
  std::string samples;
  std::string reference;
  std::string target;
  std::vector<double> a;
  std::vector<double> direction;
  double fail_above = -1.0;
  std::string out;
};

int run_diagnose(const DiagnoseArgs& a) {
  if (a.reference.empty() == a.target.empty()) {
    usage_error("give exactly one of --reference or --target");
  }
  lcs_samples* raw = nullptr;
  check(lcs_samples_read_csv(a.samples.c_str(), &raw));
  auto samples = own(raw);

  json report{{"samples", a.samples}};
  bool failed = false;

  if (!a.reference.empty()) {
    lcs_samples* ref_raw = nullptr;
    check(lcs_samples_read_csv(a.reference.c_str(), &ref_raw));
    auto reference = own(ref_raw);
    double mean = 0, median = 0, q1 = 0, q3 = 0;
    check(lcs_marginal_distances(samples.get(), reference.get(), &mean, &median,
                                 &q1, &q3));
    report["reference"] = a.reference;
    report["marginal_distances"] =
        json{{"mean", mean}, {"median", median}, {"q1", q1}, {"q3", q3}};
    if (a.fail_above >= 0.0) {
      failed = mean > a.fail_above || median > a.fail_above ||
               q1 > a.fail_above || q3 > a.fail_above;
    }
  } else {
    if (a.target != "mixture") usage_error("--target supports the mixture tag");
    if (a.a.empty()) usage_error("--target mixture needs --a");
    lcs_model* model_raw = nullptr;
    check(lcs_model_mixture(a.a.data(), static_cast<int>(a.a.size()), &model_raw));
    auto model = own(model_raw);

    std::vector<double> dir = a.direction;
    if (dir.empty()) dir = a.a;
    if (dir.size() != a.a.size()) usage_error("--direction has wrong dimension");
    double norm = 0.0;
    for (const double v : dir) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) usage_error("--direction must be nonzero");
    for (double& v : dir) v /= norm;

    double ks = 0.0;
    check(lcs_ks_mixture_projection(samples.get(), model.get(), dir.data(), &ks));
    long long mean_flags = 0, cov_flags = 0;
    double worst_mean = 0, worst_cov = 0;
    check(lcs_moment_check_mixture(samples.get(), model.get(), &mean_flags,
                                   &cov_flags, &worst_mean, &worst_cov));
    report["target"] = "mixture";
    report["projection_direction"] = dir;
    report["ks_distance"] = ks;
    report["moment_check"] = json{{"mean_flags", mean_flags},
                                  {"cov_flags", cov_flags},
                                  {"worst_mean_ratio", worst_mean},
                                  {"worst_cov_ratio", worst_cov}};
    if (a.fail_above >= 0.0) failed = ks > a.fail_above;
  }

  report["fail_above"] = a.fail_above;
  report["failed"] = failed;
  emit(report, a.out);
  return failed ? 1 : 0;
}

struct CompareArgs {
  int p = 2;
  long long n = 200;
  double eps = 0.1;
  long long N = 100;
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 1;
  double lambda = 0.0;
  int threads = 0;
  double fail_above = -1.0;
  std::string out_lmc, out_lmco2, out;
};

int run_lmco2_compare(CompareArgs a) {
  apply_cl_seed(&a.seed);
  lcs_model* raw = nullptr;
  check(lcs_model_logistic_generate(a.p, a.n, a.data_seed, a.lambda, &raw));
  auto model = own(raw);

  double m = 0, M = 0, Lg = -1;
  check(lcs_model_certificate(model.get(), &m, &M, &Lg));

  lcs_plan* plan_lmc_raw = nullptr;
  check(lcs_plan_lmc(a.p, m, M, a.eps, &plan_lmc_raw));
  auto plan_a = own(plan_lmc_raw);
  lcs_plan* plan_lmco_raw = nullptr;
  check(lcs_plan_lmco(a.p, m, M, Lg, a.eps, &plan_lmco_raw));
  auto plan_b = own(plan_lmco_raw);

  lcs_samples* sa_raw = nullptr;
  check(lcs_run_ensemble(model.get(), plan_a.get(), LCS_ALGO_FROM_PLAN, a.N,
                         a.seed, a.threads, &sa_raw));
  auto run_a = own(sa_raw);
  lcs_samples* sb_raw = nullptr;
  const std::uint64_t seed_b = mix_seed(a.seed, 0x4c4d434f32ULL);
  check(lcs_run_ensemble(model.get(), plan_b.get(), LCS_ALGO_LMCO2, a.N, seed_b,
                         a.threads, &sb_raw));
  auto run_b = own(sb_raw);

  lcs_samples* ma_raw = nullptr;
  check(lcs_samples_map_back(run_a.get(), model.get(), &ma_raw));
  auto mapped_a = own(ma_raw);
  lcs_samples* mb_raw = nullptr;
  check(lcs_samples_map_back(run_b.get(), model.get(), &mb_raw));
  auto mapped_b = own(mb_raw);

  if (!a.out_lmc.empty()) {
    check(lcs_samples_write_csv(mapped_a.get(), a.out_lmc.c_str()));
  }
  if (!a.out_lmco2.empty()) {
    check(lcs_samples_write_csv(mapped_b.get(), a.out_lmco2.c_str()));
  }

  double mean = 0, median = 0, q1 = 0, q3 = 0;
  check(lcs_marginal_distances(mapped_a.get(), mapped_b.get(), &mean, &median,
                               &q1, &q3));
  long long K_a = 0, K_b = 0;
  check(lcs_plan_get(plan_a.get(), nullptr, nullptr, &K_a, nullptr, nullptr,
                     nullptr));
  check(lcs_plan_get(plan_b.get(), nullptr, nullptr, &K_b, nullptr, nullptr,
                     nullptr));

  bool failed = false;
  if (a.fail_above >= 0.0) {
    failed = mean > a.fail_above || median > a.fail_above ||
             q1 > a.fail_above || q3 > a.fail_above;
  }
  const json report{
      {"config",
       json{{"p", a.p},
            {"n", a.n},
            {"eps", a.eps},
            {"N", a.N},
            {"seed", a.seed},
            {"seed_lmco2", seed_b},
            {"data_seed", a.data_seed}}},
      {"plan_lmc", json::parse(plan_json_string(plan_a.get()))},
      {"plan_lmco2", json::parse(plan_json_string(plan_b.get()))},
      {"K_lmc", K_a},
      {"K_lmco2", K_b},
      {"marginal_distances",
       json{{"mean", mean}, {"median", median}, {"q1", q1}, {"q3", q3}}},
      {"fail_above", a.fail_above},
      {"failed", failed}};
  emit(report, a.out);
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sampling from smooth strongly log-concave densities with "
      "nonasymptotically planned Langevin algorithms"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  CLI::App* plan_cmd =
      app.add_subcommand("plan", "Derive (T, h, K) with a certified TV budget");
  plan_cmd->add_option("--algo", plan_args.algo, "lmc, lmc-warm, lmc-convexified or lmco")
      ->required();
  plan_cmd->add_option("--p", plan_args.p, "dimension")->required();
  plan_cmd->add_option("--m", plan_args.m, "strong-convexity constant")->required();
  plan_cmd->add_option("--M", plan_args.M, "gradient Lipschitz constant")->required();
  plan_cmd->add_option("--eps", plan_args.eps, "target TV accuracy")->required();
  plan_cmd->add_option("--Lf", plan_args.Lf, "Hessian Lipschitz constant (lmco)");
  plan_cmd->add_option("--chi2", plan_args.chi2, "chi-square bound (lmc-warm)");
  plan_cmd->add_option("--mu2", plan_args.mu2, "second moment of the start (lmc-warm)");

  SampleArgs sample_args;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "Run chains and write samples as CSV");
  sample_cmd->add_option("--target", sample_args.target,
                         "mixture, logistic or direct-mixture")
      ->required();
  sample_cmd->add_option("--a", sample_args.a, "mixture separation vector")
      ->delimiter(',');
  sample_cmd->add_option("--algo", sample_args.algo, "lmc, lmco or lmco2");
  sample_cmd->add_option("--eps", sample_args.eps, "target TV accuracy");
  sample_cmd->add_option("--N", sample_args.N, "number of chains")->required();
  sample_cmd->add_option("--seed", sample_args.seed, "RNG seed");
  sample_cmd->add_option("--out", sample_args.out, "output CSV path")->required();
  sample_cmd->add_option("--threads", sample_args.threads,
                         "worker cap (0 = hardware)");
  sample_cmd->add_option("--p", sample_args.p, "logistic dimension");
  sample_cmd->add_option("--n", sample_args.n, "logistic sample size");
  sample_cmd->add_option("--data-seed", sample_args.data_seed,
                         "logistic dataset seed");
  sample_cmd->add_option("--lambda", sample_args.lambda,
                         "ridge weight (0 = default 3p/pi^2)");
  sample_cmd->add_option("--x-csv", sample_args.x_csv, "design matrix CSV");
  sample_cmd->add_option("--y-csv", sample_args.y_csv, "labels CSV");
  sample_cmd->add_flag("--convexify", sample_args.convexify,
                       "strong-convexify the logistic target first");
  sample_cmd->add_option("--save-data", sample_args.save_data,
                         "write the dataset as PREFIX_X.csv / PREFIX_y.csv");

  Table1Args table1_args;
  CLI::App* table1_cmd =
      app.add_subcommand("table1", "Planner iteration counts per dimension");
  table1_cmd->add_option("--p-list", table1_args.p_list, "dimensions")
      ->required()
      ->delimiter(',');
  table1_cmd->add_option("--eps", table1_args.eps, "target TV accuracy");
  table1_cmd->add_option("--m", table1_args.m, "strong-convexity constant");
  table1_cmd->add_option("--M", table1_args.M, "gradient Lipschitz constant");
  table1_cmd->add_option("--Lf", table1_args.Lf, "Hessian Lipschitz constant");
  table1_cmd->add_option("--out", table1_args.out, "CSV path (default stdout)");

  LogisticKKArgs kk_args;
  CLI::App* kk_cmd = app.add_subcommand(
      "logistic-kk", "Iteration counts with and without convexification");
  kk_cmd->add_option("--p", kk_args.p, "dimension")->required();
  kk_cmd->add_option("--n", kk_args.n, "dataset size")->required();
  kk_cmd->add_option("--eps", kk_args.eps, "target TV accuracy");
  kk_cmd->add_option("--trials", kk_args.trials, "number of datasets");
  kk_cmd->add_option("--seed", kk_args.seed, "base seed");
  kk_cmd->add_option("--lambda", kk_args.lambda, "ridge weight (0 = default)");
  kk_cmd->add_option("--out", kk_args.out, "report path (default stdout)");

  DiagnoseArgs diag_args;
  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "Compare samples against a reference");
  diag_cmd->add_option("--samples", diag_args.samples, "samples CSV")->required();
  diag_cmd->add_option("--reference", diag_args.reference, "reference CSV");
  diag_cmd->add_option("--target", diag_args.target, "analytic target tag");
  diag_cmd->add_option("--a", diag_args.a, "mixture separation vector")
      ->delimiter(',');
  diag_cmd->add_option("--direction", diag_args.direction,
                       "projection direction (default a)")
      ->delimiter(',');
  diag_cmd->add_option("--fail-above", diag_args.fail_above,
                       "exit 1 when a distance exceeds this");
  diag_cmd->add_option("--out", diag_args.out, "report path (default stdout)");

  CompareArgs cmp_args;
  CLI::App* cmp_cmd = app.add_subcommand(
      "lmco2-compare", "LMC vs second-order Ozaki run on a logistic posterior");
  cmp_cmd->add_option("--p", cmp_args.p, "dimension");
  cmp_cmd->add_option("--n", cmp_args.n, "dataset size");
  cmp_cmd->add_option("--eps", cmp_args.eps, "target TV accuracy");
  cmp_cmd->add_option("--N", cmp_args.N, "chains per algorithm");
  cmp_cmd->add_option("--seed", cmp_args.seed, "RNG seed");
  cmp_cmd->add_option("--data-seed", cmp_args.data_seed, "dataset seed");
  cmp_cmd->add_option("--lambda", cmp_args.lambda, "ridge weight (0 = default)");
  cmp_cmd->add_option("--threads", cmp_args.threads, "worker cap (0 = hardware)");
  cmp_cmd->add_option("--fail-above", cmp_args.fail_above,
                      "exit 1 when a distance exceeds this");
  cmp_cmd->add_option("--out-lmc", cmp_args.out_lmc, "write LMC samples here");
  cmp_cmd->add_option("--out-lmco2", cmp_args.out_lmco2,
                      "write LMCO2 samples here");
  cmp_cmd->add_option("--out", cmp_args.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*plan_cmd) return run_plan(plan_args);
  if (*sample_cmd) return run_sample(sample_args);
  if (*table1_cmd) return run_table1(table1_args);
  if (*kk_cmd) return run_logistic_kk(kk_args);
  if (*diag_cmd) return run_diagnose(diag_args);
  if (*cmp_cmd) return run_lmco2_compare(cmp_args);
  return 2;
}
