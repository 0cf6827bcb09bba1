#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "model.hpp"

namespace ep::stats {

// Standard normal CDF via erfc; absolute error well below 1e-12.
double normal_cdf(double x);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1}
// exp(-2 j^2 lambda^2), truncated at 100 terms and clamped to [0, 1].
double kolmogorov_q(double lambda);

struct KsResult {
    double d = 0.0;        // sup distance to the standard normal CDF
    double p_value = 0.0;  // asymptotic p-value at lambda = sqrt(m) * d
    std::size_t count = 0;
};

// One-sample Kolmogorov-Smirnov test against the standard normal;
// refuses fewer than 8 samples.
KsResult ks_normal(std::vector<double> samples);

struct MomentEstimate {
    double mean = 0.0;       // sample mean of x^p
    double std_error = 0.0;  // sample sd of x^p divided by sqrt(m)
    std::size_t count = 0;
};

// Requires at least 2 samples.
MomentEstimate moment_estimate(const std::vector<double>& samples, int p);

// Upper tail of the chi-square distribution (regularized incomplete
// gamma Q(df/2, x/2)).
double chi2_sf(double x, double df);

// Pearson chi-square test of observed counts against expected
// probabilities; cells are folded smallest-last until every expected
// count is >= 5.
struct Chi2Result {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 0.0;
};
Chi2Result chi2_test(const std::vector<long long>& observed, const std::vector<double>& expected_probs);

// Monte Carlo experiment kinds:
//   moments       block-count and size-class moments at n vs closed forms
//   clt_kn        block-count fluctuation statistics at n, with the
//                 diversity estimate taken at the horizon rule
//   clt_krn       size-class fluctuation statistics at n (self-contained
//                 centering, no diversity estimate needed)
//   lil           iterated-logarithm ratio along geometric checkpoints
//   shat_moments  moments of the terminal diversity estimate at horizon n
//   cross_moments coupled product E[K_n * S] / E[K_{r,n} * S] vs closed
//                 forms, with the estimate at the horizon rule
enum class Kind { moments, clt_kn, clt_krn, lil, shat_moments, cross_moments };

const char* kind_name(Kind k);

struct ExperimentConfig {
    Model params{0.5, 0.5};
    Kind kind = Kind::moments;
    long long n = 1000;              // primary index (horizon for lil/shat_moments)
    int r = 1;                       // size class for clt_krn / cross_moments
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::vector<long long> checkpoints;  // lil only; defaults to the geometric grid
    std::vector<int> tracked_r = {1, 2}; // moments only
    int workers = 0;                     // 0 = EP_WORKERS env var, else all cores
};

// One named comparison row. reference/z/tolerance are NaN when the row has
// no closed-form reference (e.g. a raw p-value report). pass reflects the
// row's own criterion; informational rows always pass.
struct ResultRow {
    std::string name;
    double estimate = 0.0;
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double reference = std::numeric_limits<double>::quiet_NaN();
    double z = std::numeric_limits<double>::quiet_NaN();
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    bool pass = true;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::uint64_t excluded = 0;  // invalid self-normalized samples
    std::vector<ResultRow> rows;
    std::vector<std::string> table_header;  // optional per-trajectory table
    std::vector<std::vector<double>> table;

    bool pass() const;
    // Serialized forms contain the config echo (including the seed) and a
    // schema version, but never the worker count: identical configs give
    // byte-identical output at any parallelism.
    std::string to_json() const;
    std::string to_csv() const;
};

// Runs config.trials independent trajectories on a worker pool and
// aggregates the statistics for config.kind. Trajectory i draws its random
// stream from (seed, i), so results are deterministic for any worker
// count. A failing trajectory aborts the run with its (seed, index).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Mean of the block-count ratio estimator K_{1,n}/K_n over independent
// trajectories (the consistency route to alpha). Same determinism contract
// as run_experiment.
ResultRow run_alpha_estimate(const Model& m, long long n, std::uint64_t trials,
                             std::uint64_t seed, int workers = 0);

// Resolved worker count: explicit value, else EP_WORKERS, else all cores.
int resolve_workers(int requested);

}  // namespace ep::stats
