#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fenwick.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace ep {

// What a single construction step did. joined_r is the size class an
// existing block was drawn from (its count moves from r to r+1); it is 0
// for new-block steps and, on the lumped walker only, for joins beyond the
// tracked range.
struct StepOutcome {
    bool new_block = false;
    int joined_r = 0;
};

// Size-class state of the sequential partition construction. Only the
// counts K_{r,n} are stored (sparse map plus the Fenwick weight index);
// block identities are never materialized, so a step costs O(log n) and
// memory is proportional to the number of distinct block sizes.
class PartitionState {
  public:
    explicit PartitionState(const Model& m);

    const Model& model() const { return m_; }
    long long n() const { return n_; }
    long long k() const { return k_; }
    long long count(int r) const;
    int max_size() const { return max_size_; }
    const std::map<int, long long>& counts() const { return counts_; }

    // (alpha K_n + theta) / (n + theta); the n = 0 step is deterministic
    // and reported as probability 1.
    double new_block_prob() const;
    // (r - alpha) K_{r,n} / (n + theta)
    double join_prob(int r) const;

    void apply_new_block();
    void apply_join(int r);

    // Size class selected by a cumulative-weight query with
    // target in [0, n - alpha K_n). Does not mutate state.
    int sample_join(double target) const;

    // Full consistency sweep: counts positive, sum r K_r = n, sum K_r = K,
    // Fenwick totals equal to the same integers, and the integer identity
    // total weight = n - alpha K. Throws std::logic_error on violation.
    void check_invariants() const;

  private:
    void ensure_capacity(int r);

    Model m_;
    long long n_ = 0;
    long long k_ = 0;
    int max_size_ = 0;
    std::map<int, long long> counts_;
    WeightIndex index_;
};

// One trajectory of the sequential construction: a state plus its own
// random stream. The first step is deterministic (a singleton block) and
// consumes no randomness; every later step consumes exactly one uniform,
// so trajectories are reproducible from (seed, trajectory) alone.
class Sampler {
  public:
    Sampler(const Model& m, std::uint64_t seed, std::uint64_t trajectory);

    StepOutcome step();
    void run_to(long long n_target);

    long long n() const { return state_.n(); }
    long long k() const { return state_.k(); }
    const PartitionState& state() const { return state_; }

  private:
    PartitionState state_;
    Rng rng_;
};

}  // namespace ep
