/* lcsamp: C interface to the log-concave sampling library.
 *
 * All functions return lcs_status; on failure lcs_last_error() gives a
 * thread-local human-readable reason.  Objects returned through out
 * parameters are owned by the caller and released with the matching
 * _free function.  Passing NULL where an object is required yields
 * LCS_ERR_INVALID.
 */
#ifndef LCSAMP_H
#define LCSAMP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcs_status {
  LCS_OK = 0,
  LCS_ERR_INVALID = 1,    /* bad arguments or malformed input */
  LCS_ERR_INFEASIBLE = 2, /* valid request with no feasible answer */
  LCS_ERR_RUNTIME = 3,    /* divergence or failed iteration */
  LCS_ERR_IO = 4          /* file could not be read or written */
} lcs_status;

typedef struct lcs_model lcs_model;
typedef struct lcs_plan lcs_plan;
typedef struct lcs_samples lcs_samples;

/* Message describing the last failure on this thread. */
const char* lcs_last_error(void);

/* ------------------------------------------------------------------ */
/* Models                                                             */

/* Gaussian mixture 0.5 N(a, I) + 0.5 N(-a, I); requires |a| < 1. */
lcs_status lcs_model_mixture(const double* a, int p, lcs_model** out);

/* Ridge-logistic posterior from CSV files (X matrix, Y labels).
 * lambda <= 0 selects the default 3 p / pi^2.  The model exposed for
 * sampling is the preconditioned potential g(y) = f(A y). */
lcs_status lcs_model_logistic_csv(const char* x_path, const char* y_path,
                                  double lambda, lcs_model** out);

/* Same posterior on a synthetic dataset with +-1/sqrt(p) design rows. */
lcs_status lcs_model_logistic_generate(int p, long long n, uint64_t seed,
                                       double lambda, lcs_model** out);

/* Writes the dataset behind a logistic model as two CSVs plus a JSON
 * sidecar at x_path + ".json" recording the generation config. */
lcs_status lcs_logistic_save_csv(const lcs_model* model, const char* x_path,
                                 const char* y_path);

lcs_status lcs_model_dim(const lcs_model* model, int* p);

/* Certificate constants; *L_f is set to -1 when the model carries no
 * Hessian-Lipschitz constant. */
lcs_status lcs_model_certificate(const lcs_model* model, double* m, double* M,
                                 double* L_f);

/* Stationary point in the model's sampling coordinates (the whitened
 * variable y for logistic models).  buf must hold dim entries. */
lcs_status lcs_model_stationary_point(const lcs_model* model, double* buf,
                                      int len);

/* Radius search for strong-convexification of a logistic model.  Any
 * out pointer may be NULL. */
lcs_status lcs_logistic_optimal_R(const lcs_model* model, double eps,
                                  double* R, double* barm, double* gamma,
                                  double* mu_R, double* m_2R);

/* Applies the quadratic tail penalty chosen by lcs_logistic_optimal_R,
 * yielding a model with certificate (barm, barM = M + gamma). */
lcs_status lcs_model_convexify_auto(const lcs_model* model, double eps,
                                    lcs_model** out);

void lcs_model_free(lcs_model* model);

/* ------------------------------------------------------------------ */
/* Plans                                                              */

lcs_status lcs_plan_lmc(int p, double m, double M, double eps, lcs_plan** out);
lcs_status lcs_plan_lmc_warm(int p, double m, double M, double eps,
                             double chi2, double mu2, lcs_plan** out);
lcs_status lcs_plan_lmco(int p, double m, double M, double L_f, double eps,
                         lcs_plan** out);
lcs_status lcs_plan_convexified(int p, double barm, double barM, double eps,
                                lcs_plan** out);

/* Plan fields; *alpha is set to -1 for algorithms without one.  Any
 * out pointer may be NULL. */
lcs_status lcs_plan_get(const lcs_plan* plan, double* T, double* h,
                        long long* K, double* alpha, double* eps,
                        double* predicted_tv);

/* Serializes the plan.  Call with buf == NULL to query the required
 * size (including the terminating NUL) through *len, then again with a
 * buffer of that size. */
lcs_status lcs_plan_to_json(const lcs_plan* plan, char* buf, size_t* len);

lcs_status lcs_plan_from_json(const char* json, lcs_plan** out);

void lcs_plan_free(lcs_plan* plan);

/* ------------------------------------------------------------------ */
/* Sampling                                                           */

/* Algorithm override values for lcs_run_ensemble. */
#define LCS_ALGO_FROM_PLAN (-1)
#define LCS_ALGO_LMC 0
#define LCS_ALGO_LMCO 1
#define LCS_ALGO_LMCO2 2

/* Runs n_chains independent chains of plan->K steps, each started from
 * N(theta_star, M^{-1} I), and keeps the final states.  n_threads <= 0
 * uses all hardware threads; the thread count never changes results. */
lcs_status lcs_run_ensemble(const lcs_model* model, const lcs_plan* plan,
                            int algo_override, long long n_chains,
                            uint64_t seed, int n_threads, lcs_samples** out);

/* Exact mixture draws (mixture models only). */
lcs_status lcs_mixture_direct_sample(const lcs_model* model, long long n,
                                     uint64_t seed, lcs_samples** out);

lcs_status lcs_samples_shape(const lcs_samples* samples, long long* n, int* p);
lcs_status lcs_samples_get(const lcs_samples* samples, long long i, int j,
                           double* value);

/* CSV with header x1..xp plus sidecar JSON at path + ".json". */
lcs_status lcs_samples_write_csv(const lcs_samples* samples, const char* path);
lcs_status lcs_samples_read_csv(const char* path, lcs_samples** out);

/* Maps whitened samples back to natural coordinates, theta = A eta.
 * Requires a model built with a preconditioner. */
lcs_status lcs_samples_map_back(const lcs_samples* samples,
                                const lcs_model* model, lcs_samples** out);

void lcs_samples_free(lcs_samples* samples);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                        */

/* KS distance between the projection of the samples onto direction
 * (unit norm, dim entries) and the analytic 1D law of the projected
 * mixture.  Mixture models only. */
lcs_status lcs_ks_mixture_projection(const lcs_samples* samples,
                                     const lcs_model* model,
                                     const double* direction, double* ks);

/* Coordinate-averaged L1 gaps between mean/median/quartile vectors of
 * two sample sets.  Any out pointer may be NULL. */
lcs_status lcs_marginal_distances(const lcs_samples* a, const lcs_samples* b,
                                  double* mean, double* median, double* q1,
                                  double* q3);

/* Flags sample moments further than 4 asymptotic standard errors from
 * the analytic mixture moments (mean 0, covariance I + a a^T). */
lcs_status lcs_moment_check_mixture(const lcs_samples* samples,
                                    const lcs_model* model,
                                    long long* mean_flags,
                                    long long* cov_flags,
                                    double* worst_mean_ratio,
                                    double* worst_cov_ratio);

/* Tests mean |x - theta_star|^2 + 3 SE <= (M/m)(p/M) + 2 M p / m^2,
 * the energy bound for chains started from N(theta_star, M^{-1} I).
 * *pass receives 1 or 0. */
lcs_status lcs_energy_check(const lcs_samples* samples,
                            const lcs_model* model, double* empirical,
                            double* se, double* bound, int* pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LCSAMP_H */
