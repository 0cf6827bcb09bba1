#include "ewens_pitman.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "partition.hpp"
#include "stats.hpp"
#include "version.hpp"

struct ep_model {
    ep::Model m;
};

struct ep_sampler {
    ep::Sampler s;
};

struct ep_experiment {
    ep::stats::ExperimentConfig cfg;
};

struct ep_result {
    ep::stats::ExperimentResult res;
};

namespace {

thread_local std::string g_last_error;

// Runs the body under a translation layer from exceptions to status
// codes; every fallible entry point goes through here so the error
// contract is uniform.
template <class Fn>
ep_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        fn();
        return EP_OK;
    } catch (const std::invalid_argument& ex) {
        g_last_error = ex.what();
        return EP_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& ex) {
        g_last_error = ex.what();
        return EP_ERR_DOMAIN;
    } catch (const std::logic_error& ex) {
        g_last_error = ex.what();
        return EP_ERR_LOGIC;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return EP_ERR_NOMEM;
    } catch (const std::runtime_error& ex) {
        g_last_error = ex.what();
        return EP_ERR_RUNTIME;
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return EP_ERR_UNKNOWN;
    }
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool parse_kind(const char* name, ep::stats::Kind& out) {
    using ep::stats::Kind;
    static const std::pair<const char*, Kind> table[] = {
        {"moments", Kind::moments},           {"clt_kn", Kind::clt_kn},
        {"clt_krn", Kind::clt_krn},           {"lil", Kind::lil},
        {"shat_moments", Kind::shat_moments}, {"cross_moments", Kind::cross_moments},
    };
    for (const auto& [key, kind] : table) {
        if (std::strcmp(name, key) == 0) {
            out = kind;
            return true;
        }
    }
    return false;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* ep_version(void) { return ep::kVersion; }

const char* ep_last_error(void) { return g_last_error.c_str(); }

void ep_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

ep_status ep_model_create(double alpha, double theta, ep_model** out) {
    return guarded([&] {
        require(out != nullptr, "ep_model_create: out pointer is null");
        *out = new ep_model{ep::Model(alpha, theta)};
    });
}

void ep_model_free(ep_model* m) { delete m; }

double ep_model_alpha(const ep_model* m) { return m ? m->m.alpha : kNan; }

double ep_model_theta(const ep_model* m) { return m ? m->m.theta : kNan; }

/* ------------------------------------------------------------------ */

ep_status ep_exact_mean_kn(const ep_model* m, long long n, double* out) {
    return guarded([&] {
        require(m && out, "ep_exact_mean_kn: null argument");
        *out = ep::exact::mean_kn(m->m, n);
    });
}

ep_status ep_exact_raw_moment_kn(const ep_model* m, long long n, int p, double* out,
                                 int* cancel_warn) {
    return guarded([&] {
        require(m && out, "ep_exact_raw_moment_kn: null argument");
        ep::exact::MomentValue v = ep::exact::raw_moment_kn(m->m, n, p);
        *out = v.value;
        if (cancel_warn) *cancel_warn = v.cancel_warn ? 1 : 0;
    });
}

ep_status ep_exact_falling_moment_krn(const ep_model* m, long long n, int r, int p,
                                      double* out, int* cancel_warn) {
    return guarded([&] {
        require(m && out, "ep_exact_falling_moment_krn: null argument");
        ep::exact::MomentValue v = ep::exact::falling_moment_krn(m->m, n, r, p);
        *out = v.value;
        if (cancel_warn) *cancel_warn = v.cancel_warn ? 1 : 0;
    });
}

ep_status ep_exact_dist_kn(const ep_model* m, int n, double* probs) {
    return guarded([&] {
        require(m && probs, "ep_exact_dist_kn: null argument");
        std::vector<double> dist = ep::exact::exact_dist_kn(m->m, n);
        std::memcpy(probs, dist.data(), dist.size() * sizeof(double));
    });
}

ep_status ep_exact_block_size_weight(const ep_model* m, int r, double* out) {
    return guarded([&] {
        require(m && out, "ep_exact_block_size_weight: null argument");
        *out = ep::exact::block_size_weight(m->m, r);
    });
}

ep_status ep_exact_limit_moment_s(const ep_model* m, int p, double* out) {
    return guarded([&] {
        require(m && out, "ep_exact_limit_moment_s: null argument");
        *out = ep::exact::limit_moment_s(m->m, p);
    });
}

ep_status ep_exact_cross_moment_kn_s(const ep_model* m, long long n, double* out) {
    return guarded([&] {
        require(m && out, "ep_exact_cross_moment_kn_s: null argument");
        *out = ep::exact::cross_moment_kn_s(m->m, n);
    });
}

ep_status ep_exact_cross_moment_krn_s(const ep_model* m, long long n, int r, double* out) {
    return guarded([&] {
        require(m && out, "ep_exact_cross_moment_krn_s: null argument");
        *out = ep::exact::cross_moment_krn_s(m->m, n, r);
    });
}

/* ------------------------------------------------------------------ */

ep_status ep_sampler_create(const ep_model* m, uint64_t seed, uint64_t trajectory,
                            ep_sampler** out) {
    return guarded([&] {
        require(m && out, "ep_sampler_create: null argument");
        *out = new ep_sampler{ep::Sampler(m->m, seed, trajectory)};
    });
}

void ep_sampler_free(ep_sampler* s) { delete s; }

ep_status ep_sampler_step(ep_sampler* s, int* new_block, int* joined_r) {
    return guarded([&] {
        require(s != nullptr, "ep_sampler_step: null handle");
        ep::StepOutcome out = s->s.step();
        if (new_block) *new_block = out.new_block ? 1 : 0;
        if (joined_r) *joined_r = out.joined_r;
    });
}

ep_status ep_sampler_run_to(ep_sampler* s, long long n) {
    return guarded([&] {
        require(s != nullptr, "ep_sampler_run_to: null handle");
        s->s.run_to(n);
    });
}

long long ep_sampler_n(const ep_sampler* s) { return s ? s->s.n() : 0; }

long long ep_sampler_k(const ep_sampler* s) { return s ? s->s.k() : 0; }

long long ep_sampler_count(const ep_sampler* s, int r) {
    return (s && r >= 1) ? s->s.state().count(r) : 0;
}

int ep_sampler_max_size(const ep_sampler* s) { return s ? s->s.state().max_size() : 0; }

ep_status ep_sampler_validate(const ep_sampler* s) {
    return guarded([&] {
        require(s != nullptr, "ep_sampler_validate: null handle");
        s->s.state().check_invariants();
    });
}

/* ------------------------------------------------------------------ */

ep_status ep_experiment_create(const ep_model* m, const char* kind, ep_experiment** out) {
    return guarded([&] {
        require(m && kind && out, "ep_experiment_create: null argument");
        ep::stats::Kind k = ep::stats::Kind::moments;
        require(parse_kind(kind, k), "ep_experiment_create: unknown experiment kind");
        auto* e = new ep_experiment;
        e->cfg.params = m->m;
        e->cfg.kind = k;
        *out = e;
    });
}

void ep_experiment_free(ep_experiment* e) { delete e; }

ep_status ep_experiment_set_n(ep_experiment* e, long long n) {
    return guarded([&] {
        require(e != nullptr, "ep_experiment_set_n: null handle");
        e->cfg.n = n;
    });
}

ep_status ep_experiment_set_r(ep_experiment* e, int r) {
    return guarded([&] {
        require(e != nullptr, "ep_experiment_set_r: null handle");
        e->cfg.r = r;
    });
}

ep_status ep_experiment_set_trials(ep_experiment* e, uint64_t trials) {
    return guarded([&] {
        require(e != nullptr, "ep_experiment_set_trials: null handle");
        e->cfg.trials = trials;
    });
}

ep_status ep_experiment_set_seed(ep_experiment* e, uint64_t seed) {
    return guarded([&] {
        require(e != nullptr, "ep_experiment_set_seed: null handle");
        e->cfg.seed = seed;
    });
}

ep_status ep_experiment_set_workers(ep_experiment* e, int workers) {
    return guarded([&] {
        require(e != nullptr, "ep_experiment_set_workers: null handle");
        e->cfg.workers = workers;
    });
}

ep_status ep_experiment_set_checkpoints(ep_experiment* e, const long long* v, size_t count) {
    return guarded([&] {
        require(e && (v || count == 0), "ep_experiment_set_checkpoints: null argument");
        e->cfg.checkpoints.assign(v, v + count);
    });
}

ep_status ep_experiment_set_tracked_sizes(ep_experiment* e, const int* v, size_t count) {
    return guarded([&] {
        require(e && (v || count == 0), "ep_experiment_set_tracked_sizes: null argument");
        e->cfg.tracked_r.assign(v, v + count);
    });
}

ep_status ep_experiment_run(const ep_experiment* e, ep_result** out) {
    return guarded([&] {
        require(e && out, "ep_experiment_run: null argument");
        *out = new ep_result{ep::stats::run_experiment(e->cfg)};
    });
}

void ep_result_free(ep_result* r) { delete r; }

int ep_result_pass(const ep_result* r) { return (r && r->res.pass()) ? 1 : 0; }

uint64_t ep_result_excluded(const ep_result* r) { return r ? r->res.excluded : 0; }

size_t ep_result_row_count(const ep_result* r) { return r ? r->res.rows.size() : 0; }

const char* ep_result_row_name(const ep_result* r, size_t i) {
    if (!r || i >= r->res.rows.size()) return nullptr;
    return r->res.rows[i].name.c_str();
}

ep_status ep_result_row(const ep_result* r, size_t i, double* estimate, double* std_error,
                        double* reference, double* z, double* tolerance, int* pass) {
    return guarded([&] {
        require(r != nullptr, "ep_result_row: null handle");
        require(i < r->res.rows.size(), "ep_result_row: index out of range");
        const ep::stats::ResultRow& row = r->res.rows[i];
        if (estimate) *estimate = row.estimate;
        if (std_error) *std_error = row.std_error;
        if (reference) *reference = row.reference;
        if (z) *z = row.z;
        if (tolerance) *tolerance = row.tolerance;
        if (pass) *pass = row.pass ? 1 : 0;
    });
}

ep_status ep_result_to_json(const ep_result* r, char** out) {
    return guarded([&] {
        require(r && out, "ep_result_to_json: null argument");
        *out = dup_string(r->res.to_json());
    });
}

ep_status ep_result_to_csv(const ep_result* r, char** out) {
    return guarded([&] {
        require(r && out, "ep_result_to_csv: null argument");
        *out = dup_string(r->res.to_csv());
    });
}

/* ------------------------------------------------------------------ */

ep_status ep_alpha_estimate(const ep_model* m, long long n, uint64_t trials, uint64_t seed,
                            int workers, double* estimate, double* std_error, int* pass) {
    return guarded([&] {
        require(m && estimate, "ep_alpha_estimate: null argument");
        ep::stats::ResultRow row = ep::stats::run_alpha_estimate(m->m, n, trials, seed, workers);
        *estimate = row.estimate;
        if (std_error) *std_error = row.std_error;
        if (pass) *pass = row.pass ? 1 : 0;
    });
}

/* ------------------------------------------------------------------ */

ep_status ep_oracle_check_gfc(int n_max, double* max_rel_err, int* pass) {
    return guarded([&] {
        require(n_max >= 1 && n_max <= 25, "ep_oracle_check_gfc: n_max must be in [1, 25]");
        using ep::oracle::BigRat;
        const std::pair<double, BigRat> alphas[] = {
            {0.25, BigRat(1, 4)}, {0.5, BigRat(1, 2)}, {0.75, BigRat(3, 4)}};
        double worst = 0.0;
        for (const auto& [a_dbl, a_rat] : alphas) {
            ep::exact::GfcTable table = ep::exact::gfc_table(a_dbl, n_max);
            for (int n = 1; n <= n_max; ++n) {
                for (int k = 1; k <= n; ++k) {
                    double recurrence = table.at(n, k);
                    double reference =
                        ep::oracle::gfc_exact(n, k, a_rat).convert_to<double>();
                    double rel = std::abs(recurrence - reference) / std::abs(reference);
                    if (rel > worst) worst = rel;
                }
            }
        }
        if (max_rel_err) *max_rel_err = worst;
        if (pass) *pass = worst <= 1e-12 ? 1 : 0;
    });
}

ep_status ep_oracle_check_dist(const ep_model* m, int n_max, double* max_abs_err, int* pass) {
    return guarded([&] {
        require(m != nullptr, "ep_oracle_check_dist: null handle");
        require(n_max >= 1 && n_max <= 10000,
                "ep_oracle_check_dist: n_max must be in [1, 10000]");
        double worst = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            std::vector<double> closed = ep::exact::exact_dist_kn(m->m, n);
            std::vector<double> recursion = ep::oracle::dp_dist_kn(m->m, n);
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                double diff = std::abs(closed[k] - recursion[k]);
                if (diff > worst) worst = diff;
                sum += closed[k];
            }
            double defect = std::abs(sum - 1.0);
            if (defect > worst) worst = defect;
        }
        if (max_abs_err) *max_abs_err = worst;
        if (pass) *pass = worst <= 1e-10 ? 1 : 0;
    });
}

}  // extern "C"
