#include "exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ep::exact {

namespace {

constexpr double kLog10 = 2.302585092994046;

double lg(double x) { return std::lgamma(x); }

}  // namespace

SignedLog rising(double a, long long n) {
    if (n < 0) throw std::domain_error("rising: n must be >= 0");
    if (n == 0) return SignedLog::one();
    if (a > 0.0 && n > 16)
        return SignedLog::from_log(lg(a + static_cast<double>(n)) - lg(a));
    // walk past any nonpositive leading factors, then close with lgamma
    SignedLog acc = SignedLog::one();
    long long k = 0;
    while (k < n && (a + static_cast<double>(k) <= 0.5 || n - k <= 16)) {
        acc = acc * SignedLog::from_value(a + static_cast<double>(k));
        if (acc.is_zero()) return acc;
        ++k;
    }
    if (k < n) {
        double a2 = a + static_cast<double>(k);
        acc = acc * SignedLog::from_log(lg(a2 + static_cast<double>(n - k)) - lg(a2));
    }
    return acc;
}

double log_rising_pos(double a, long long n) {
    SignedLog s = rising(a, n);
    if (s.sign != 1) throw std::domain_error("log_rising_pos: factors not all positive");
    return s.lg;
}

double log_falling_int(long long n, int p) {
    if (p < 0 || p > n) throw std::domain_error("log_falling_int: need 0 <= p <= n");
    double nd = static_cast<double>(n);
    return lg(nd + 1.0) - lg(nd - p + 1.0);
}

std::uint64_t stirling2(int p, int k) {
    if (p < 0 || k < 0 || k > p) throw std::domain_error("stirling2: need 0 <= k <= p");
    if (p > 25) throw std::domain_error("stirling2: p > 25 exceeds 64-bit range");
    std::vector<std::uint64_t> row(p + 1, 0);
    row[0] = 1;   // S(0,0)
    for (int n = 1; n <= p; ++n) {
        for (int j = std::min(n, p); j >= 1; --j)
            row[j] = j * row[j] + row[j - 1];
        row[0] = 0;
    }
    return row[k];
}

double binom(int p, int k) {
    if (k < 0 || k > p) return 0.0;
    double v = 1.0;
    for (int j = 1; j <= k; ++j)
        v = v * static_cast<double>(p - k + j) / static_cast<double>(j);
    return std::round(v);
}

double GfcTable::log_at(int n, int k) const {
    if (n < 1 || n > n_max || k < 1 || k > n)
        throw std::out_of_range("GfcTable: index outside triangle");
    return lg[static_cast<std::size_t>(n) * (n - 1) / 2 + (k - 1)];
}

double GfcTable::at(int n, int k) const { return std::exp(log_at(n, k)); }

namespace {

// one recurrence step: given row n (log values, k = 1..n) produce row n+1
void gfc_step(double alpha, int n, const std::vector<double>& cur, std::vector<double>& next) {
    next.assign(n + 1, 0.0);
    for (int k = 1; k <= n + 1; ++k) {
        double t1 = (k <= n) ? std::log(n - k * alpha) + cur[k - 1]
                             : -std::numeric_limits<double>::infinity();
        double t2 = (k >= 2) ? std::log(alpha) + cur[k - 2]
                             : -std::numeric_limits<double>::infinity();
        double hi = std::max(t1, t2), lo = std::min(t1, t2);
        next[k - 1] = std::isinf(hi) ? lo : hi + std::log1p(std::exp(lo - hi));
    }
}

}  // namespace

GfcTable gfc_table(double alpha, int n_max) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("gfc_table: need alpha in (0,1)");
    if (n_max < 1 || n_max > 10000) throw std::domain_error("gfc_table: need 1 <= n_max <= 10000");
    GfcTable t;
    t.n_max = n_max;
    t.alpha = alpha;
    t.lg.reserve(static_cast<std::size_t>(n_max) * (n_max + 1) / 2);
    std::vector<double> cur{std::log(alpha)}, next;
    t.lg.push_back(cur[0]);
    for (int n = 1; n < n_max; ++n) {
        gfc_step(alpha, n, cur, next);
        cur.swap(next);
        t.lg.insert(t.lg.end(), cur.begin(), cur.end());
    }
    return t;
}

double log_b(const Model& m, BKind kind, long long n, int aux) {
    if (n < 1) throw std::domain_error("log_b: need n >= 1");
    double a = m.alpha, t = m.theta;
    double nd = static_cast<double>(n);
    switch (kind) {
        case BKind::plain:
            // Gamma(n+t)Gamma(1+a+t) / (Gamma(1+t)Gamma(n+a+t))
            return lg(nd + t) + lg(1.0 + a + t) - lg(1.0 + t) - lg(nd + a + t);
        case BKind::block_p: {
            if (aux < 1) throw std::domain_error("log_b: block_p needs p >= 1");
            double ap = a * aux;
            return lg(nd + ap + t) + lg(1.0 + t) - lg(1.0 + ap + t) - lg(nd + t);
        }
        case BKind::size_r: {
            if (aux < 1) throw std::domain_error("log_b: size_r needs r >= 1");
            if (n <= aux) return 0.0;
            double r = static_cast<double>(aux);
            // (theta+r)^(n-r) / (theta+alpha)^(n-r)
            return lg(nd + t) - lg(r + t) - lg(nd - r + a + t) + lg(a + t);
        }
    }
    throw std::logic_error("log_b: unreachable");
}

double mean_kn(const Model& m, long long n) {
    m.require_positive_alpha("mean_kn");
    if (n < 1) throw std::domain_error("mean_kn: need n >= 1");
    double a = m.alpha, t = m.theta;
    if (t == 0.0)
        return std::exp(log_rising_pos(a, n) - std::log(a) - lg(static_cast<double>(n)));
    SignedLog ratio = rising(a + t, n) / rising(t, n);
    SignedLog v = SignedLog::from_value(t / a) * (ratio - SignedLog::one());
    return v.value();
}

namespace {

// alternating sum used by the falling moments of K_n:
//   theta != 0: sum_{k=0}^p (-1)^{p-k} binom(p,k) (k*alpha+theta)^(n)
//   theta == 0: same with the k = 0 term dropped ((theta)^(n) -> 0)
SignedLog falling_kn_sum(const Model& m, long long n, int p) {
    SignedLog s = SignedLog::zero();
    for (int k = (m.theta == 0.0 ? 1 : 0); k <= p; ++k) {
        SignedLog term = SignedLog::from_value(binom(p, k)) * rising(k * m.alpha + m.theta, n);
        if ((p - k) % 2) term = -term;
        s = s + term;
    }
    return s;
}

MomentValue clamp_tiny(SignedLog v, double max_lg) {
    // beyond ~13 digits of cancellation the remainder is rounding noise
    if (v.sign != 0 && max_lg - v.lg > 13.0 * kLog10) return {0.0, true};
    return {v.value(), v.cancel_warn};
}

}  // namespace

MomentValue falling_moment_kn(const Model& m, long long n, int p) {
    m.require_positive_alpha("falling_moment_kn");
    if (n < 1 || p < 0) throw std::domain_error("falling_moment_kn: need n >= 1, p >= 0");
    if (p == 0) return {1.0, false};
    if (p > n) return {0.0, true};   // K_n <= n, so (K_n)_(p) vanishes
    double a = m.alpha, t = m.theta;
    SignedLog sum = falling_kn_sum(m, n, p);
    double max_lg = rising(p * a + t, n).lg;   // dominant term of the sum
    SignedLog pref = (t == 0.0)
        ? SignedLog::from_log(lg(static_cast<double>(p)) - std::log(a) - lg(static_cast<double>(n)))
        : rising(t / a, p) / rising(t, n);
    return clamp_tiny(pref * sum, max_lg + pref.lg);
}

MomentValue raw_moment_kn(const Model& m, long long n, int p) {
    if (p < 0) throw std::domain_error("raw_moment_kn: need p >= 0");
    if (p == 0) return {1.0, false};
    double v = 0.0;
    bool warn = false;
    for (int j = 1; j <= p; ++j) {
        MomentValue f = falling_moment_kn(m, n, j);
        v += static_cast<double>(stirling2(p, j)) * f.value;
        warn = warn || f.cancel_warn;
    }
    return {v, warn};
}

double block_size_weight(const Model& m, int r) {
    m.require_positive_alpha("block_size_weight");
    if (r < 1) throw std::domain_error("block_size_weight: need r >= 1");
    return std::exp(std::log(m.alpha) + rising(1.0 - m.alpha, r - 1).lg
                    - lg(static_cast<double>(r) + 1.0));
}

MomentValue falling_moment_krn(const Model& m, long long n, int r, int p) {
    m.require_positive_alpha("falling_moment_krn");
    if (n < 1 || r < 1 || p < 0) throw std::domain_error("falling_moment_krn: bad arguments");
    if (p == 0) return {1.0, false};
    if (static_cast<long long>(r) * p > n) return {0.0, false};   // K_{r,n} <= n/r
    double a = m.alpha, t = m.theta;
    SignedLog v = SignedLog::from_log(p * std::log(block_size_weight(m, r))
                                      + log_falling_int(n, r * p));
    v = v * rising(t + a * p, n - static_cast<long long>(r) * p);
    if (t == 0.0)
        v = v * SignedLog::from_log(lg(static_cast<double>(p)) - std::log(a)
                                    - lg(static_cast<double>(n)));
    else
        v = v * rising(t / a, p) / rising(t, n);
    if (v.sign < 0) throw std::logic_error("falling_moment_krn: negative value");
    return {v.value(), v.cancel_warn};
}

MomentValue raw_moment_krn(const Model& m, long long n, int r, int p) {
    if (p < 0) throw std::domain_error("raw_moment_krn: need p >= 0");
    if (p == 0) return {1.0, false};
    double v = 0.0;
    bool warn = false;
    for (int j = 1; j <= p; ++j) {
        MomentValue f = falling_moment_krn(m, n, r, j);
        v += static_cast<double>(stirling2(p, j)) * f.value;
        warn = warn || f.cancel_warn;
    }
    return {v, warn};
}

double limit_moment_s(const Model& m, int p) {
    m.require_positive_alpha("limit_moment_s");
    if (p < 1) throw std::domain_error("limit_moment_s: need p >= 1");
    double a = m.alpha, t = m.theta;
    if (t == 0.0)
        return std::exp(lg(static_cast<double>(p)) - std::log(a) - lg(a * p));
    SignedLog v = SignedLog::from_log(lg(t + 1.0) - lg(a * p + t));
    v = v * rising(t / a, p) / SignedLog::from_value(t);
    if (v.sign != 1) throw std::logic_error("limit_moment_s: expected positive value");
    return v.value();
}

std::vector<double> exact_dist_kn(const Model& m, int n) {
    m.require_positive_alpha("exact_dist_kn");
    if (n < 1 || n > 10000) throw std::domain_error("exact_dist_kn: need 1 <= n <= 10000");
    double a = m.alpha, t = m.theta;
    // roll the GFC recurrence up to row n; O(n) memory
    std::vector<double> cur{std::log(a)}, next;
    for (int i = 1; i < n; ++i) {
        gfc_step(a, i, cur, next);
        cur.swap(next);
    }
    std::vector<double> probs(n);
    for (int k = 1; k <= n; ++k) {
        if (t == 0.0) {
            probs[k - 1] = std::exp(lg(static_cast<double>(k)) + cur[k - 1]
                                    - std::log(a) - lg(static_cast<double>(n)));
        } else {
            SignedLog pref = rising(t / a, k) / rising(t, n);
            if (pref.sign != 1) throw std::logic_error("exact_dist_kn: negative mass");
            probs[k - 1] = std::exp(pref.lg + cur[k - 1]);
        }
    }
    return probs;
}

double cross_moment_kn_s(const Model& m, long long n) {
    m.require_positive_alpha("cross_moment_kn_s");
    if (n < 1) throw std::domain_error("cross_moment_kn_s: need n >= 1");
    double nd = static_cast<double>(n);
    double scale = std::exp(lg(m.theta + nd) - lg(nd + m.alpha + m.theta));
    return scale * ((m.theta / m.alpha) * mean_kn(m, n) + raw_moment_kn(m, n, 2).value);
}

double cross_moment_krn_s(const Model& m, long long n, int r) {
    m.require_positive_alpha("cross_moment_krn_s");
    if (n < 1 || r < 1) throw std::domain_error("cross_moment_krn_s: need n, r >= 1");
    if (r > n) return 0.0;
    double nd = static_cast<double>(n);
    double l = lg(m.theta + 1.0) - lg(nd + m.alpha + m.theta)
             + std::log(block_size_weight(m, r)) + log_falling_int(n, r)
             + log_rising_pos(m.theta + 2.0 * m.alpha, n - r);
    return std::exp(l) * (m.alpha + m.theta) / (m.alpha * m.alpha);
}

}  // namespace ep::exact
