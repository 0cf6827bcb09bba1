#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "partition.hpp"
#include "rng.hpp"

namespace ep {

// Lumped walker over (K_n, K_{1,n}, ..., K_{R,n}). The one-step transition
// probabilities of these coordinates depend only on the coordinates
// themselves — a new block needs (alpha K + theta), a join into size r <= R
// needs (r - alpha) K_r, and every larger join only bumps n — so the walker
// has exactly the same law as the marginal of the full construction, at a
// flat O(R) cost per step and O(R) memory regardless of n. R = 0 tracks
// K_n alone. The draw sequence matches Sampler: the first step is
// deterministic, each later step consumes one uniform.
class TrackedChain {
  public:
    TrackedChain(const Model& m, int r_max, std::uint64_t seed, std::uint64_t trajectory)
        : m_(m), r_max_(r_max), kr_(static_cast<std::size_t>(r_max) + 2, 0),
          rng_(Rng::stream(seed, trajectory)) {
        if (r_max < 0 || r_max > 64)
            throw std::invalid_argument("TrackedChain: tracked size range must be in [0, 64]");
    }

    long long n() const { return n_; }
    long long k() const { return k_; }
    long long k_r(int r) const {
        return (r >= 1 && r <= r_max_) ? kr_[static_cast<std::size_t>(r)] : 0;
    }
    int r_max() const { return r_max_; }
    Rng& rng() { return rng_; }

    StepOutcome step() {
        if (n_ == 0) {
            n_ = 1;
            k_ = 1;
            if (r_max_ >= 1) kr_[1] = 1;
            return {true, 0};
        }
        double u = rng_.uniform() * (static_cast<double>(n_) + m_.theta);
        double c = m_.alpha * static_cast<double>(k_) + m_.theta;
        if (u < c) {
            ++k_;
            ++n_;
            if (r_max_ >= 1) ++kr_[1];
            return {true, 0};
        }
        for (int r = 1; r <= r_max_; ++r) {
            c += (static_cast<double>(r) - m_.alpha) * static_cast<double>(kr_[r]);
            if (u < c) {
                --kr_[r];
                if (r < r_max_) ++kr_[r + 1];
                ++n_;
                return {false, r};
            }
        }
        ++n_;  // joined a block larger than any tracked class
        return {false, 0};
    }

    void run_to(long long n_target) {
        while (n_ < n_target) step();
    }

    // Tight loop for stretches where only K_n matters. Identical draw
    // usage and identical law of K as step() (both branches compare the
    // same uniform against alpha K + theta), so switching mid-trajectory
    // is exact for K; the tracked size-class counts are NOT maintained and
    // are stale afterwards.
    void run_to_k_only(long long n_target) {
        if (n_ == 0 && n_target > 0) step();
        const double a = m_.alpha, t = m_.theta;
        double kd = static_cast<double>(k_);
        for (long long i = n_; i < n_target; ++i) {
            double u = rng_.uniform() * (static_cast<double>(i) + t);
            if (u < a * kd + t) kd += 1.0;
        }
        if (n_target > n_) {
            k_ = static_cast<long long>(kd);
            n_ = n_target;
        }
    }

  private:
    Model m_;
    int r_max_;
    long long n_ = 0;
    long long k_ = 0;
    std::vector<long long> kr_;
    Rng rng_;
};

// Hot path for horizons where only K_n matters (tail runs toward a terminal
// diversity estimate): same transition rule and same per-step draw count as
// TrackedChain with r_max = 0, so switching engines mid-trajectory changes
// neither the law nor the stream position.
inline void advance_k_only(const Model& m, long long& n, long long& k, long long n_target,
                           Rng& rng) {
    if (n >= n_target) return;
    if (n == 0) {
        n = 1;
        k = 1;
        if (n >= n_target) return;
    }
    const double a = m.alpha, t = m.theta;
    double kd = static_cast<double>(k);
    for (long long i = n; i < n_target; ++i) {
        double u = rng.uniform() * (static_cast<double>(i) + t);
        if (u < a * kd + t) kd += 1.0;
    }
    k = static_cast<long long>(kd);
    n = n_target;
}

}  // namespace ep
