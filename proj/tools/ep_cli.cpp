// Command-line front end for the two-parameter random-partition toolkit.
// Every subcommand is a thin adapter over the public C API: flags are
// validated, the library call is made, and the result is written as CSV
// or JSON with a schema header and the seed echoed. Exit codes: 0 on
// success, 1 on validation error, 2 when a verification experiment ran
// but failed its criterion.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ewens_pitman.h>

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Prints to stdout or to --out; returns false (exit 1) when the file
// cannot be opened.
bool write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return true;
    }
    std::ofstream out(path);
    if (!out) {
        std::fprintf(stderr, "ep: cannot open output file '%s'\n", path.c_str());
        return false;
    }
    out << text;
    return out.good();
}

int fail_with_library_error() {
    std::fprintf(stderr, "ep: %s\n", ep_last_error());
    return 1;
}

struct ModelHandle {
    ep_model* m = nullptr;
    ~ModelHandle() { ep_model_free(m); }
    // exit-1 semantics: invalid parameters are a validation error
    bool create(double alpha, double theta) {
        if (ep_model_create(alpha, theta, &m) != EP_OK) {
            std::fprintf(stderr, "ep: %s\n", ep_last_error());
            return false;
        }
        return true;
    }
};

// Shared flag bundle; each subcommand registers only the flags it uses.
struct Args {
    double alpha = 0.5;
    double theta = 0.5;
    long long n = 1000;
    int p = 1;
    int r = 0;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::vector<long long> checkpoints;
    std::string out;
    std::string format = "csv";
};

void add_model_flags(CLI::App* cmd, Args& a) {
    cmd->add_option("--alpha", a.alpha, "Discount parameter, in [0, 1)")
        ->capture_default_str();
    cmd->add_option("--theta", a.theta, "Strength parameter, > -alpha")
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Args& a) {
    cmd->add_option("--out", a.out, "Write output to this path instead of stdout");
    cmd->add_option("--format", a.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

// Runs a configured experiment, writes the serialized result, and maps
// the aggregate pass flag to the exit code.
int run_and_report(ep_experiment* e, const Args& a) {
    ep_result* res = nullptr;
    if (ep_experiment_run(e, &res) != EP_OK) return fail_with_library_error();
    char* text = nullptr;
    ep_status st = a.format == "json" ? ep_result_to_json(res, &text)
                                      : ep_result_to_csv(res, &text);
    if (st != EP_OK) {
        ep_result_free(res);
        return fail_with_library_error();
    }
    std::string body(text);
    if (a.format == "json") body += "\n";
    ep_string_free(text);
    bool wrote = write_output(a.out, body);
    int pass = ep_result_pass(res);
    ep_result_free(res);
    if (!wrote) return 1;
    return pass ? 0 : 2;
}

int cmd_exact_dist(const Args& a) {
    ModelHandle model;
    if (!model.create(a.alpha, a.theta)) return 1;
    if (a.n < 1 || a.n > 10000) {
        std::fprintf(stderr, "ep: exact-dist needs n in [1, 10000]\n");
        return 1;
    }
    std::vector<double> probs(static_cast<std::size_t>(a.n));
    if (ep_exact_dist_kn(model.m, static_cast<int>(a.n), probs.data()) != EP_OK)
        return fail_with_library_error();
    std::string body;
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "ep-dist/1";
        j["alpha"] = a.alpha;
        j["theta"] = a.theta;
        j["n"] = a.n;
        j["probs"] = probs;
        body = j.dump(2) + "\n";
    } else {
        body = "# schema=ep-dist/1 alpha=" + fmt(a.alpha) + " theta=" + fmt(a.theta) +
               " n=" + std::to_string(a.n) + "\nk,prob\n";
        for (long long k = 1; k <= a.n; ++k)
            body += std::to_string(k) + "," + fmt(probs[static_cast<std::size_t>(k - 1)]) + "\n";
    }
    return write_output(a.out, body) ? 0 : 1;
}

int cmd_moments(const Args& a) {
    ModelHandle model;
    if (!model.create(a.alpha, a.theta)) return 1;
    double value = 0.0;
    int warn = 0;
    const char* name;
    if (a.r == 0) {
        if (ep_exact_raw_moment_kn(model.m, a.n, a.p, &value, &warn) != EP_OK)
            return fail_with_library_error();
        name = "raw_moment_Kn";
    } else {
        if (ep_exact_falling_moment_krn(model.m, a.n, a.r, a.p, &value, &warn) != EP_OK)
            return fail_with_library_error();
        name = "falling_moment_Krn";
    }
    if (warn)
        std::fprintf(stderr,
                     "ep: warning: alternating sum lost more than ten decimal digits\n");
    std::string body;
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "ep-moment/1";
        j["name"] = name;
        j["alpha"] = a.alpha;
        j["theta"] = a.theta;
        j["n"] = a.n;
        j["r"] = a.r;
        j["p"] = a.p;
        j["value"] = value;
        j["cancel_warn"] = warn != 0;
        body = j.dump(2) + "\n";
    } else {
        // the bare value, so the command composes in shell pipelines
        body = fmt(value) + "\n";
    }
    return write_output(a.out, body) ? 0 : 1;
}

int cmd_sample(const Args& a) {
    ModelHandle model;
    if (!model.create(a.alpha, a.theta)) return 1;
    ep_sampler* s = nullptr;
    if (ep_sampler_create(model.m, a.seed, 0, &s) != EP_OK) return fail_with_library_error();
    if (ep_sampler_run_to(s, a.n) != EP_OK) {
        ep_sampler_free(s);
        return fail_with_library_error();
    }
    long long k = ep_sampler_k(s);
    int max_size = ep_sampler_max_size(s);
    std::string body;
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "ep-sample/1";
        j["alpha"] = a.alpha;
        j["theta"] = a.theta;
        j["n"] = a.n;
        j["seed"] = a.seed;
        j["k"] = k;
        j["max_size"] = max_size;
        ordered_json counts = ordered_json::array();
        for (int r = 1; r <= max_size; ++r) {
            long long c = ep_sampler_count(s, r);
            if (c > 0) counts.push_back({{"r", r}, {"count", c}});
        }
        j["size_counts"] = counts;
        body = j.dump(2) + "\n";
    } else {
        body = "# schema=ep-sample/1 alpha=" + fmt(a.alpha) + " theta=" + fmt(a.theta) +
               " n=" + std::to_string(a.n) + " seed=" + std::to_string(a.seed) +
               " k=" + std::to_string(k) + " max_size=" + std::to_string(max_size) +
               "\nr,count\n";
        for (int r = 1; r <= max_size; ++r) {
            long long c = ep_sampler_count(s, r);
            if (c > 0) body += std::to_string(r) + "," + std::to_string(c) + "\n";
        }
    }
    ep_sampler_free(s);
    return write_output(a.out, body) ? 0 : 1;
}

// kind: "moments" with tracked sizes 1..max(r,2), "clt_kn"/"clt_krn"
// by r, "lil" with an optional explicit grid.
int cmd_experiment(const Args& a, const std::string& kind) {
    ModelHandle model;
    if (!model.create(a.alpha, a.theta)) return 1;
    ep_experiment* e = nullptr;
    if (ep_experiment_create(model.m, kind.c_str(), &e) != EP_OK)
        return fail_with_library_error();
    ep_experiment_set_n(e, a.n);
    ep_experiment_set_trials(e, a.trials);
    ep_experiment_set_seed(e, a.seed);
    if (kind == "clt_krn") ep_experiment_set_r(e, a.r);
    if (kind == "moments") {
        std::vector<int> tracked;
        for (int r = 1; r <= std::max(a.r, 2); ++r) tracked.push_back(r);
        ep_experiment_set_tracked_sizes(e, tracked.data(), tracked.size());
    }
    if (kind == "lil" && !a.checkpoints.empty())
        ep_experiment_set_checkpoints(e, a.checkpoints.data(), a.checkpoints.size());
    int rc = run_and_report(e, a);
    ep_experiment_free(e);
    return rc;
}

int cmd_estimate_alpha(const Args& a) {
    ModelHandle model;
    if (!model.create(a.alpha, a.theta)) return 1;
    double est = 0.0, se = 0.0;
    int pass = 0;
    if (ep_alpha_estimate(model.m, a.n, a.trials, a.seed, 0, &est, &se, &pass) != EP_OK)
        return fail_with_library_error();
    std::string body;
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "ep-alpha/1";
        j["alpha"] = a.alpha;
        j["theta"] = a.theta;
        j["n"] = a.n;
        j["trials"] = a.trials;
        j["seed"] = a.seed;
        j["estimate"] = est;
        j["std_error"] = se;
        j["tolerance"] = 0.02;
        j["pass"] = pass != 0;
        body = j.dump(2) + "\n";
    } else {
        body = "# schema=ep-alpha/1 alpha=" + fmt(a.alpha) + " theta=" + fmt(a.theta) +
               " n=" + std::to_string(a.n) + " trials=" + std::to_string(a.trials) +
               " seed=" + std::to_string(a.seed) + "\n" +
               "name,estimate,std_error,reference,tolerance,pass\n" +
               "alpha_estimate_mean," + fmt(est) + "," + fmt(se) + "," + fmt(a.alpha) +
               ",0.02," + (pass ? "1" : "0") + "\n";
    }
    if (!write_output(a.out, body)) return 1;
    return pass ? 0 : 2;
}

int cmd_oracle_check(const Args& a) {
    if (a.n < 1 || a.n > 10000) {
        std::fprintf(stderr, "ep: oracle-check needs a bound in [1, 10000]\n");
        return 1;
    }
    int gfc_bound = static_cast<int>(std::min<long long>(a.n, 25));
    double gfc_err = 0.0, dist_err = 0.0;
    int gfc_pass = 0;
    if (ep_oracle_check_gfc(gfc_bound, &gfc_err, &gfc_pass) != EP_OK)
        return fail_with_library_error();
    // closed-form law vs forward recursion on the standard parameter grid
    int dist_pass = 1;
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (double theta : {-0.1, 0.0, 1.0}) {
            ModelHandle model;
            if (!model.create(alpha, theta)) return 1;
            double err = 0.0;
            int pass = 0;
            if (ep_oracle_check_dist(model.m, static_cast<int>(a.n), &err, &pass) != EP_OK)
                return fail_with_library_error();
            if (err > dist_err) dist_err = err;
            if (!pass) dist_pass = 0;
        }
    }
    std::string body;
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "ep-oracle/1";
        j["gfc"] = {{"nmax", gfc_bound}, {"max_rel_err", gfc_err}, {"pass", gfc_pass != 0}};
        j["dist"] = {{"nmax", a.n}, {"grid_points", 9}, {"max_abs_err", dist_err},
                     {"pass", dist_pass != 0}};
        body = j.dump(2) + "\n";
    } else {
        body = "# schema=ep-oracle/1\nsuite,nmax,max_err,pass\n";
        body += "gfc_recurrence_vs_rational," + std::to_string(gfc_bound) + "," +
                fmt(gfc_err) + "," + (gfc_pass ? "1" : "0") + "\n";
        body += "dist_closed_vs_recursion," + std::to_string(a.n) + "," + fmt(dist_err) +
                "," + (dist_pass ? "1" : "0") + "\n";
    }
    if (!write_output(a.out, body)) return 1;
    return (gfc_pass && dist_pass) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact computations, streaming simulation, and Monte Carlo verification\n"
        "for the two-parameter family of exchangeable random partitions\n"
        "(block count K_n, size-class counts K_{r,n}, diversity limit S)."};
    app.require_subcommand(1);
    app.footer("Verification experiments size their worker pool from the EP_WORKERS\n"
               "environment variable (default: all available cores); results are\n"
               "byte-identical for any worker count.");

    Args a;
    int rc = 0;

    CLI::App* exact_dist = app.add_subcommand(
        "exact-dist", "Exact law of the block count: P(K_n = k) for k = 1..n");
    add_model_flags(exact_dist, a);
    exact_dist->add_option("--n", a.n, "Sample size")->capture_default_str();
    add_output_flags(exact_dist, a);
    exact_dist->callback([&] { rc = cmd_exact_dist(a); });

    CLI::App* moments = app.add_subcommand(
        "moments",
        "Exact moment: p-th raw moment of the block count, or with --r the\n"
        "p-th falling-factorial moment of the count of size-r blocks");
    add_model_flags(moments, a);
    moments->add_option("--n", a.n, "Sample size")->capture_default_str();
    moments->add_option("--p", a.p, "Moment order")->capture_default_str();
    moments->add_option("--r", a.r, "Size class (0 = block count)")->capture_default_str();
    add_output_flags(moments, a);
    moments->callback([&] { rc = cmd_moments(a); });

    CLI::App* sample = app.add_subcommand(
        "sample", "Run one sampler trajectory to n and print its size-class counts");
    add_model_flags(sample, a);
    sample->add_option("--n", a.n, "Sample size")->capture_default_str();
    sample->add_option("--seed", a.seed, "Random stream seed")->capture_default_str();
    add_output_flags(sample, a);
    sample->callback([&] { rc = cmd_sample(a); });

    CLI::App* vmom = app.add_subcommand(
        "verify-moments",
        "Monte Carlo check: sampled means of K_n, K_n^2 and the size-class\n"
        "counts against the exact closed forms, at four standard errors");
    add_model_flags(vmom, a);
    vmom->add_option("--n", a.n, "Sample size")->capture_default_str();
    vmom->add_option("--r", a.r, "Track size classes 1..r (minimum 2)")->capture_default_str();
    vmom->add_option("--trials", a.trials, "Independent trajectories")->capture_default_str();
    vmom->add_option("--seed", a.seed, "Random stream seed")->capture_default_str();
    add_output_flags(vmom, a);
    vmom->callback([&] { rc = cmd_experiment(a, "moments"); });

    CLI::App* vclt = app.add_subcommand(
        "verify-clt",
        "Monte Carlo check of the Gaussian fluctuation limits: the\n"
        "self-normalized statistic against the standard normal (KS) and the\n"
        "mixed-scaling variance against its limit; --r 0 checks the block\n"
        "count, --r >= 1 the count of size-r blocks");
    add_model_flags(vclt, a);
    vclt->add_option("--n", a.n, "Sample size at which fluctuations are read")
        ->capture_default_str();
    vclt->add_option("--r", a.r, "Size class (0 = block count)")->capture_default_str();
    vclt->add_option("--trials", a.trials, "Independent trajectories")->capture_default_str();
    vclt->add_option("--seed", a.seed, "Random stream seed")->capture_default_str();
    add_output_flags(vclt, a);
    vclt->callback([&] { rc = cmd_experiment(a, a.r == 0 ? "clt_kn" : "clt_krn"); });

    CLI::App* lil = app.add_subcommand(
        "lil",
        "Iterated-logarithm diagnostic: running max of the normalized squared\n"
        "deviation along geometric checkpoints, banded against the terminal\n"
        "diversity estimate");
    add_model_flags(lil, a);
    lil->add_option("--n", a.n, "Horizon (last checkpoint)")->capture_default_str();
    lil->add_option("--trials", a.trials, "Independent trajectories")->capture_default_str();
    lil->add_option("--seed", a.seed, "Random stream seed")->capture_default_str();
    lil->add_option("--checkpoints", a.checkpoints,
                    "Explicit checkpoint list (default: geometric grid from 16)")
        ->delimiter(',');
    add_output_flags(lil, a);
    lil->callback([&] { rc = cmd_experiment(a, "lil"); });

    CLI::App* est = app.add_subcommand(
        "estimate-alpha",
        "Recover the discount parameter from the singleton-to-block ratio\n"
        "K_{1,n}/K_n averaged over independent trajectories");
    add_model_flags(est, a);
    est->add_option("--n", a.n, "Sample size per trajectory")->capture_default_str();
    est->add_option("--trials", a.trials, "Independent trajectories")->capture_default_str();
    est->add_option("--seed", a.seed, "Random stream seed")->capture_default_str();
    add_output_flags(est, a);
    est->callback([&] { rc = cmd_estimate_alpha(a); });

    CLI::App* oracle = app.add_subcommand(
        "oracle-check",
        "Cross-check the combinatorial recurrence against an exact rational\n"
        "oracle (up to min(n, 25)) and the closed-form block-count law against\n"
        "an independent forward recursion on the standard parameter grid");
    long long oracle_bound = 25;
    oracle->add_option("--nmax,--n", oracle_bound, "Largest sample size checked")
        ->capture_default_str();
    add_output_flags(oracle, a);
    oracle->callback([&] {
        a.n = oracle_bound;
        rc = cmd_oracle_check(a);
    });

    CLI11_PARSE(app, argc, argv);
    return rc;
}
