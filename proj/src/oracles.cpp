#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace ep::oracle {

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt big_binom(int n, int k) {
    BigInt v = 1;
    for (int j = 1; j <= k; ++j) v = v * (n - k + j) / j;
    return v;
}

BigRat rat_rising(const BigRat& a, int n) {
    BigRat v = 1;
    for (int k = 0; k < n; ++k) v *= a + k;
    return v;
}

}  // namespace

BigRat gfc_exact(int n, int k, const BigRat& alpha) {
    if (n < 1 || n > 25 || k < 1 || k > n) throw std::domain_error("gfc_exact: need 1 <= k <= n <= 25");
    BigRat sum = 0;
    for (int j = 1; j <= k; ++j) {
        BigRat term = BigRat(big_binom(k, j)) * rat_rising(-j * alpha, n);
        sum += (j % 2) ? -term : term;
    }
    BigInt kfact = 1;
    for (int j = 2; j <= k; ++j) kfact *= j;
    return sum / BigRat(kfact);
}

std::vector<double> dp_dist_kn(const Model& m, int n) {
    if (n < 1 || n > 10000) throw std::domain_error("dp_dist_kn: need 1 <= n <= 10000");
    std::vector<double> cur{1.0}, next;   // P(K_1 = 1) = 1
    for (int i = 1; i < n; ++i) {
        next.assign(i + 1, 0.0);
        double denom = i + m.theta;
        for (int k = 1; k <= i; ++k) {
            next[k - 1] += cur[k - 1] * (i - m.alpha * k) / denom;
            next[k] += cur[k - 1] * (m.alpha * k + m.theta) / denom;
        }
        cur.swap(next);
    }
    return cur;
}

namespace {

void enumerate_rec(const Model& m, int remaining, int max_part, std::vector<int>& parts,
                   std::vector<JointCell>& out) {
    if (remaining == 0) {
        int n = 0, k = static_cast<int>(parts.size());
        for (int s : parts) n += s;
        double v = 1.0;
        for (int i = 2; i <= n; ++i) v *= i;                       // n!
        for (int j = 1; j < k; ++j) v *= m.theta + j * m.alpha;    // prod (theta + j alpha)
        for (int s : parts) {
            for (int i = 0; i < s - 1; ++i) v *= 1.0 - m.alpha + i;   // (1-alpha)^(s-1)
            for (int i = 2; i <= s; ++i) v /= i;                      // / s!
        }
        for (int i = 1; i < n; ++i) v /= m.theta + 1.0 + (i - 1);     // / (theta+1)^(n-1)
        int run = 1;
        for (std::size_t i = 1; i <= parts.size(); ++i) {
            if (i < parts.size() && parts[i] == parts[i - 1]) { ++run; continue; }
            for (int j = 2; j <= run; ++j) v /= j;                    // / m_r!
            run = 1;
        }
        out.push_back({parts, v});
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        parts.push_back(p);
        enumerate_rec(m, remaining - p, p, parts, out);
        parts.pop_back();
    }
}

}  // namespace

std::vector<JointCell> enumerate_joint(const Model& m, int n) {
    if (n < 1 || n > 12) throw std::domain_error("enumerate_joint: need 1 <= n <= 12");
    std::vector<JointCell> out;
    std::vector<int> parts;
    enumerate_rec(m, n, n, parts, out);
    return out;
}

}  // namespace ep::oracle
