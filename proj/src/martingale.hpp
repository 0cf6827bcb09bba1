#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "exact.hpp"
#include "model.hpp"

namespace ep::mart {

// One-step scale ratios of the normalizing sequences:
//   beta_kn  = b_n / b_{n+1}       = 1 + alpha/(n + theta)
//   beta_rn  = b_{r,n} / b_{r,n+1} = (n - r + theta + alpha)/(n + theta)
// for n >= r; both factors are 1 while n < r.
double beta_kn(const Model& m, long long n);
double beta_rn(const Model& m, int r, long long n);

// Transition ingredients at state n: probability of a new block, the gain
// probability p_{r,n} of size class r (a new block for r = 1, a join from
// class r-1 otherwise) and the loss probability q_{r,n} (a join out of
// class r).
double p_new_block(const Model& m, long long n, long long k);
double p_gain(const Model& m, int r, long long n, long long k, long long k_rm1);
double q_loss(const Model& m, int r, long long n, long long k_r);

// b_n (K_n + theta/alpha); requires alpha > 0.
double m_value(const Model& m, long long n, long long k);

// E[M_{n+1} | F_n] - M_n computed by enumerating the two block-count
// outcomes; identically zero in exact arithmetic. Returned in absolute
// units (b_n <= 1 always holds for the block-count scale).
double identity_residual_kn(const Model& m, long long n, long long k);

// Same check for the size-class martingale b_{r,n} K_{r,n} - A_{r,n},
// enumerating the gain/loss/no-change outcomes. The residual is returned
// in units of b_{r,n+1}, the scale in which the accumulator recursion
// lives; a_center is the rescaled accumulator A_{r,n}/b_{r,n}.
double identity_residual_krn(const Model& m, int r, long long n, long long k,
                             long long k_r, long long k_rm1, double a_center);

// Predictable quadratic-variation increments E[(M_{n+1} - M_n)^2 | F_n].
// The block-count form is b_{n+1}^2 p (1 - p); the size-class form is
// b_{r,n+1}^2 (p + q - (p - q)^2). The _scaled variants return the value
// per unit b^2, the form the running accumulators use (b_{r,n} grows like
// n^{r - alpha}, which escapes double range for deep classes at long
// horizons).
double qv_increment_kn(const Model& m, long long n, long long k);
double qv_increment_krn(const Model& m, int r, long long n, long long k, long long k_r,
                        long long k_rm1);
double qv_increment_krn_scaled(const Model& m, int r, long long n, long long k, long long k_r,
                               long long k_rm1);

// Conditional fourth moments E[(M_{n+1} - M_n)^4 | F_n]. The block-count
// closed form is b_{n+1}^4 sum_p e_n(p) K^p with polynomial coefficients
// e_n(p); the size-class closed form is
// b^4 [(p+q) - 4(p-q)^2 + 6(p+q)(p-q)^2 - 3(p-q)^4]. The _brute variants
// enumerate the outcomes directly; closed form and brute force must agree
// to full precision. _scaled variants are per unit b^4.
double fourth_increment_kn(const Model& m, long long n, long long k);
double fourth_increment_kn_brute(const Model& m, long long n, long long k);
double fourth_increment_krn(const Model& m, int r, long long n, long long k, long long k_r,
                            long long k_rm1);
double fourth_increment_krn_brute(const Model& m, int r, long long n, long long k,
                                  long long k_r, long long k_rm1);
double fourth_increment_krn_scaled(const Model& m, int r, long long n, long long k,
                                   long long k_r, long long k_rm1);
double fourth_increment_krn_brute_scaled(const Model& m, int r, long long n, long long k,
                                         long long k_r, long long k_rm1);

// Centering accumulator for the size-class martingale, maintained in the
// rescaled form value = A_{r,n}/b_{r,n} via
//   value_{n+1} = beta_rn(n) * value_n + p_{r,n}
// so every stored quantity stays polynomially bounded. Updates must be
// applied once per transition, in order n = 1, 2, ...; an out-of-order
// call throws.
class ACenter {
  public:
    explicit ACenter(int r);
    int r() const { return r_; }
    long long next_n() const { return next_n_; }
    double value() const { return value_; }
    void update(const Model& m, long long n, long long k, long long k_rm1);

  private:
    int r_;
    long long next_n_ = 1;
    double value_ = 0.0;
};

// Terminal diversity estimate K_N / N^alpha and the horizon rule
// N = min(n * 10^ceil(2/alpha), 10^8) that keeps the plug-in error small
// relative to the fluctuation scale at n.
double s_hat(long long k_at_horizon, long long horizon, double alpha);
long long s_hat_horizon(long long n, double alpha);

// Fluctuation statistics. Self-normalized forms divide by a
// trajectory-measurable scale and are asymptotically standard normal;
// mixed forms divide by n^{alpha/2} and converge to a scale mixture of
// Gaussians (variance E[S] for the block count, p_alpha(r) E[S] for size
// class r). The self-normalized size-class form is undefined at K_r = 0
// (nullopt; callers count exclusions).
double clt_self_kn(long long n, long long k, double alpha, double s_hat_value);
double clt_mixed_kn(long long n, long long k, double alpha, double s_hat_value);
std::optional<double> clt_self_krn(long long k_r, double a_center);
double clt_mixed_krn(long long n, long long k_r, double a_center, double alpha);

// Iterated-logarithm diagnostic: ratio (K_n - n^alpha S)^2 / (2 n^alpha
// log log n), evaluated with the terminal estimate in place of S. Its
// limsup along a trajectory is S itself (p_alpha(r) S for the size-class
// variant, centered at the rescaled accumulator). Checkpoints are the
// geometric grid ceil(16 * 1.5^j), where log log n is safely positive.
std::vector<long long> lil_checkpoints(long long horizon);
double lil_ratio_kn(long long n, long long k, double alpha, double s_hat_value);
double lil_ratio_krn(long long n, long long k_r, double a_center, double alpha);

// Consistent estimator K_{1,n}/K_n of alpha; throws std::domain_error
// when no blocks exist.
double alpha_estimate(long long k1, long long k);

// Per-size-class slice of a trajectory record. a_center and m_scaled are
// in units of b_{r,n} (m_scaled = K_r - A/b); the quadratic-variation sums
// are in units of b_{r,n}^2.
struct SizeClassTrack {
    int r = 0;
    long long k_r = 0;
    double log_b_rn = 0.0;
    double a_center = 0.0;
    double m_scaled = 0.0;
    double qv_pred = 0.0;
    double qv_real = 0.0;
};

// Snapshot of an instrumented trajectory at one checkpoint. Block-count
// fields are in absolute units (b_n <= 1). s_hat_value is NaN except on
// the final record, where it carries K_N/N^alpha for the run's horizon.
struct TrajectoryRecord {
    std::uint64_t trajectory = 0;
    long long n = 0;
    long long k = 0;
    double log_b_n = 0.0;
    double m_n = 0.0;
    double qv_pred_kn = 0.0;
    double qv_real_kn = 0.0;
    double s_hat_value = 0.0;
    std::vector<SizeClassTrack> tracks;
};

// Runs one full-sampler trajectory to the last checkpoint, maintaining the
// martingale scales, rescaled centerings and quadratic-variation sums
// online, and emits a record per checkpoint. Deterministic given
// (m, seed, trajectory); requires alpha > 0, sorted positive checkpoints,
// and a final checkpoint <= 10^8.
std::vector<TrajectoryRecord> instrumented_trajectory(const Model& m, std::uint64_t seed,
                                                      std::uint64_t trajectory,
                                                      const std::vector<long long>& checkpoints,
                                                      const std::vector<int>& tracked_r);

}  // namespace ep::mart
