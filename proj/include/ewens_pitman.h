/*
 * C interface to a computational toolkit for the two-parameter
 * (alpha, theta) family of exchangeable random partitions.
 *
 * The library covers three layers:
 *   - exact closed forms: the law and moments of the block count K_n, the
 *     size-class counts K_{r,n}, the limit diversity S of K_n / n^alpha,
 *     and coupled moments E[K_n S], E[K_{r,n} S];
 *   - a streaming sequential sampler with O(log n) cost per step and
 *     reproducible, counter-addressed random streams;
 *   - Monte Carlo verification experiments (moment reproduction, Gaussian
 *     fluctuation tests, an iterated-logarithm diagnostic, limit-moment and
 *     cross-moment checks) with deterministic output at any worker count.
 *
 * Conventions:
 *   - Every fallible call returns an ep_status; EP_OK is 0. On failure a
 *     human-readable message is available from ep_last_error() until the
 *     next library call on the same thread.
 *   - Objects are opaque handles created by ep_*_create and released by
 *     the matching ep_*_free; free functions accept NULL.
 *   - Trivial getters on a valid handle cannot fail and return the value
 *     directly. Passing NULL to a getter returns 0 (or NaN for doubles).
 *   - Strings returned through char** are heap-allocated; release them
 *     with ep_string_free().
 */

#ifndef EWENS_PITMAN_H
#define EWENS_PITMAN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ep_status {
    EP_OK = 0,
    EP_ERR_INVALID_ARGUMENT = 1, /* bad handle, pointer, range, or name */
    EP_ERR_DOMAIN = 2,           /* parameters outside a formula's domain */
    EP_ERR_LOGIC = 3,            /* internal consistency violation */
    EP_ERR_RUNTIME = 4,          /* experiment aborted mid-run */
    EP_ERR_NOMEM = 5,
    EP_ERR_UNKNOWN = 6
} ep_status;

/* Library version as "major.minor.patch". */
const char* ep_version(void);

/* Message for the most recent failure on this thread; empty string after
 * a successful call. The pointer stays valid until the next library call
 * on the same thread. */
const char* ep_last_error(void);

/* Releases a string returned through a char** output parameter. */
void ep_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Model parameters                                                     */

typedef struct ep_model ep_model;

/* Validates alpha in [0, 1) and theta > -alpha. Closed-form routines
 * additionally need alpha > 0 and report EP_ERR_DOMAIN otherwise; the
 * sampler accepts the full domain. */
ep_status ep_model_create(double alpha, double theta, ep_model** out);
void ep_model_free(ep_model* m);
double ep_model_alpha(const ep_model* m);
double ep_model_theta(const ep_model* m);

/* ------------------------------------------------------------------ */
/* Exact closed forms                                                   */

/* E[K_n]. */
ep_status ep_exact_mean_kn(const ep_model* m, long long n, double* out);

/* E[K_n^p], p >= 1. cancel_warn (nullable) is set to 1 when the
 * alternating sum behind the value lost more than ten decimal digits. */
ep_status ep_exact_raw_moment_kn(const ep_model* m, long long n, int p, double* out,
                                 int* cancel_warn);

/* Falling factorial moment E[(K_{r,n})_(p)] of the count of size-r
 * blocks; p = 1 gives the mean. */
ep_status ep_exact_falling_moment_krn(const ep_model* m, long long n, int r, int p,
                                      double* out, int* cancel_warn);

/* P(K_n = k) for k = 1..n, written to probs[0..n-1]; n <= 10000. */
ep_status ep_exact_dist_kn(const ep_model* m, int n, double* probs);

/* Limit frequency alpha (1-alpha)^(r-1) / r! of size-r blocks. */
ep_status ep_exact_block_size_weight(const ep_model* m, int r, double* out);

/* E[S^p] for the almost-sure limit S of K_n / n^alpha; p >= 1. */
ep_status ep_exact_limit_moment_s(const ep_model* m, int p, double* out);

/* Coupled moments E[K_n S] and E[K_{r,n} S]. */
ep_status ep_exact_cross_moment_kn_s(const ep_model* m, long long n, double* out);
ep_status ep_exact_cross_moment_krn_s(const ep_model* m, long long n, int r, double* out);

/* ------------------------------------------------------------------ */
/* Sequential sampler                                                   */

typedef struct ep_sampler ep_sampler;

/* One trajectory of the sequential construction. The random stream is a
 * pure function of (seed, trajectory): equal pairs replay bit-identical
 * paths, distinct trajectory indices give statistically independent
 * streams for the same seed. The first step is deterministic (a singleton
 * block) and consumes no randomness. */
ep_status ep_sampler_create(const ep_model* m, uint64_t seed, uint64_t trajectory,
                            ep_sampler** out);
void ep_sampler_free(ep_sampler* s);

/* Advances one element. new_block (nullable) receives 1 if a new block
 * was opened; joined_r (nullable) receives the size class an existing
 * block grew out of (0 on new-block steps). */
ep_status ep_sampler_step(ep_sampler* s, int* new_block, int* joined_r);

/* Advances until n elements are placed; a target at or below the current
 * n is a no-op. */
ep_status ep_sampler_run_to(ep_sampler* s, long long n);

long long ep_sampler_n(const ep_sampler* s);          /* elements placed */
long long ep_sampler_k(const ep_sampler* s);          /* blocks K_n */
long long ep_sampler_count(const ep_sampler* s, int r); /* K_{r,n}, r >= 1 */
int ep_sampler_max_size(const ep_sampler* s);         /* largest block size */

/* Full internal consistency sweep (count positivity, sum identities,
 * weight-index totals). EP_OK when sound, EP_ERR_LOGIC otherwise. */
ep_status ep_sampler_validate(const ep_sampler* s);

/* ------------------------------------------------------------------ */
/* Monte Carlo experiments                                              */

typedef struct ep_experiment ep_experiment;
typedef struct ep_result ep_result;

/* kind is one of:
 *   "moments"        sampled E[K_n], E[K_n^2], E[K_{r,n}] vs closed forms
 *   "clt_kn"         block-count fluctuation statistics at n
 *   "clt_krn"        size-class fluctuation statistics at n
 *   "lil"            iterated-logarithm ratio along geometric checkpoints
 *   "shat_moments"   moments of the terminal diversity estimate
 *   "cross_moments"  coupled products K_n * S and K_{r,n} * S vs closed forms
 * The experiment starts from documented defaults (n = 1000, r = 1,
 * trials = 100, seed = 1); adjust with the setters below. */
ep_status ep_experiment_create(const ep_model* m, const char* kind, ep_experiment** out);
void ep_experiment_free(ep_experiment* e);

ep_status ep_experiment_set_n(ep_experiment* e, long long n);
ep_status ep_experiment_set_r(ep_experiment* e, int r);
ep_status ep_experiment_set_trials(ep_experiment* e, uint64_t trials);
ep_status ep_experiment_set_seed(ep_experiment* e, uint64_t seed);
/* 0 = use the EP_WORKERS environment variable, else all cores. Results
 * are byte-identical for every worker count. */
ep_status ep_experiment_set_workers(ep_experiment* e, int workers);
/* Checkpoint grid for "lil" (strictly increasing, each >= 16). */
ep_status ep_experiment_set_checkpoints(ep_experiment* e, const long long* v, size_t count);
/* Size classes tabulated by "moments". */
ep_status ep_experiment_set_tracked_sizes(ep_experiment* e, const int* v, size_t count);

/* Runs the configured number of independent trajectories and aggregates
 * the comparison rows. Deterministic given (model, kind, n, r, trials,
 * seed, checkpoints, tracked sizes). */
ep_status ep_experiment_run(const ep_experiment* e, ep_result** out);

void ep_result_free(ep_result* r);

/* 1 when every comparison row met its own criterion. */
int ep_result_pass(const ep_result* r);

/* Trajectories whose self-normalized statistic was undefined (empty size
 * class) and were left out of the distribution test. */
uint64_t ep_result_excluded(const ep_result* r);

size_t ep_result_row_count(const ep_result* r);
/* Name of row i, or NULL when i is out of range. The pointer is owned by
 * the result handle. */
const char* ep_result_row_name(const ep_result* r, size_t i);
/* Fields of row i; every output pointer is nullable. Values without a
 * closed-form reference are NaN. */
ep_status ep_result_row(const ep_result* r, size_t i, double* estimate, double* std_error,
                        double* reference, double* z, double* tolerance, int* pass);

/* Full result (config echo, rows, per-trajectory table when the kind
 * produces one) as pretty-printed JSON or as CSV with a schema header
 * line. Free with ep_string_free. */
ep_status ep_result_to_json(const ep_result* r, char** out);
ep_status ep_result_to_csv(const ep_result* r, char** out);

/* ------------------------------------------------------------------ */
/* Parameter estimation                                                 */

/* Mean of the singleton-ratio estimator K_{1,n}/K_n over independent
 * trajectories. pass (nullable) reports |estimate - alpha| <= 0.02. */
ep_status ep_alpha_estimate(const ep_model* m, long long n, uint64_t trials, uint64_t seed,
                            int workers, double* estimate, double* std_error, int* pass);

/* ------------------------------------------------------------------ */
/* Oracle cross-checks                                                  */

/* Compares the two-term recurrence for the generalized factorial
 * coefficients against an exact-rational alternating sum at alpha = 1/4,
 * 1/2, 3/4 for all 1 <= k <= n <= n_max (n_max <= 25). pass reports
 * max_rel_err <= 1e-12. Output pointers are nullable. */
ep_status ep_oracle_check_gfc(int n_max, double* max_rel_err, int* pass);

/* Compares the closed-form law of K_n against an independent forward
 * recursion for every n <= n_max (n_max <= 10000), including the
 * sums-to-one defect. pass reports max_abs_err <= 1e-10. */
ep_status ep_oracle_check_dist(const ep_model* m, int n_max, double* max_abs_err, int* pass);

#ifdef __cplusplus
}
#endif

#endif /* EWENS_PITMAN_H */
