#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "model.hpp"

namespace ep::oracle {

using BigRat = boost::multiprecision::cpp_rational;

// C(n,k;alpha) in exact rational arithmetic via the alternating sum
//   (1/k!) sum_{j=1}^{k} (-1)^j binom(k,j) (-j*alpha)^(n)
// Independent of the two-term recurrence; n <= 25.
BigRat gfc_exact(int n, int k, const BigRat& alpha);

// Forward recursion for the law of K_n, valid for alpha in [0,1):
//   P(K_{n+1}=k) = P(K_n=k) (n - alpha k)/(n + theta)
//                + P(K_n=k-1) (alpha(k-1) + theta)/(n + theta)
// Returns P(K_n = k) for k = 1..n; n <= 10000.
std::vector<double> dp_dist_kn(const Model& m, int n);

struct JointCell {
    std::vector<int> sizes;   // block sizes, descending; sum = n
    double prob;
};

// Full law of the unordered partition of [n] by brute enumeration; n <= 12.
// Cell masses use the theta-cancelled sampling-formula form
//   n! prod_{j=1}^{k-1}(theta + j alpha) prod_i [(1-alpha)^(n_i - 1) / n_i!]
//      / ((theta+1)^(n-1) prod_r m_r!)
// which is well defined for theta = 0 as well.
std::vector<JointCell> enumerate_joint(const Model& m, int n);

}  // namespace ep::oracle
