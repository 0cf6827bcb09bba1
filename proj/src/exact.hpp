#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"
#include "signed_log.hpp"

namespace ep::exact {

// rising factorial (a)^(n) = a(a+1)...(a+n-1), sign-tracked; n >= 0
SignedLog rising(double a, long long n);

// log (a)^(n) for a > 0 (throws if any factor would be <= 0)
double log_rising_pos(double a, long long n);

// log of the integer falling factorial n(n-1)...(n-p+1), 0 <= p <= n
double log_falling_int(long long n, int p);

// Stirling numbers of the second kind; exact in 64 bits for p <= 25
std::uint64_t stirling2(int p, int k);

// exact binomial coefficient as double; p small (<= 60)
double binom(int p, int k);

// Triangular table of generalized factorial coefficients C(n,k;alpha),
// built by the two-term recurrence
//   C(n+1,k) = (n - k*alpha) C(n,k) + alpha C(n,k-1),  C(1,1) = alpha,
// stored as log values (every entry is positive for alpha in (0,1)).
struct GfcTable {
    int n_max = 0;
    double alpha = 0.0;
    std::vector<double> lg;   // row n at offset n(n-1)/2, entries k = 1..n

    double log_at(int n, int k) const;
    double at(int n, int k) const;
};
GfcTable gfc_table(double alpha, int n_max);   // alpha in (0,1), n_max <= 10000

enum class BKind { plain, block_p, size_r };

// log of the (positive) scale sequences used by the martingale layer:
//   plain:   b_n     = prod_{k=1}^{n-1} (k+theta)/(k+alpha+theta)
//   block_p: b_n(p)  = prod_{k=1}^{n-1} (k+alpha*p+theta)/(k+theta), aux = p
//   size_r:  b_{r,n} = prod_{k=r}^{n-1} (k+theta)/(k-r+alpha+theta), aux = r
// Each equals 1 at n = 1; size_r equals 1 for every n <= r.
double log_b(const Model& m, BKind kind, long long n, int aux = 0);

struct MomentValue {
    double value;
    bool cancel_warn;   // set when an alternating sum lost > 10 decimal digits
};

double mean_kn(const Model& m, long long n);                              // E[K_n]
MomentValue falling_moment_kn(const Model& m, long long n, int p);        // E[(K_n)_(p)]
MomentValue raw_moment_kn(const Model& m, long long n, int p);            // E[K_n^p]
MomentValue falling_moment_krn(const Model& m, long long n, int r, int p);
MomentValue raw_moment_krn(const Model& m, long long n, int r, int p);

// p_alpha(r) = alpha (1-alpha)^(r-1) / r!, the limit block-size frequency
double block_size_weight(const Model& m, int r);

// E[S^p] for the a.s. limit S of K_n / n^alpha; p >= 1
double limit_moment_s(const Model& m, int p);

// P(K_n = k), k = 1..n, from the GFC law; requires alpha > 0, n <= 10000
std::vector<double> exact_dist_kn(const Model& m, int n);

double cross_moment_kn_s(const Model& m, long long n);           // E[K_n S]
double cross_moment_krn_s(const Model& m, long long n, int r);   // E[K_{r,n} S]

}  // namespace ep::exact
