#include "partition.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ep {

PartitionState::PartitionState(const Model& m) : m_(m), index_(64) {}

long long PartitionState::count(int r) const {
    auto it = counts_.find(r);
    return it == counts_.end() ? 0 : it->second;
}

double PartitionState::new_block_prob() const {
    if (n_ == 0) return 1.0;
    return (m_.alpha * static_cast<double>(k_) + m_.theta) /
           (static_cast<double>(n_) + m_.theta);
}

double PartitionState::join_prob(int r) const {
    long long c = count(r);
    if (c == 0) return 0.0;
    return (static_cast<double>(r) - m_.alpha) * static_cast<double>(c) /
           (static_cast<double>(n_) + m_.theta);
}

void PartitionState::ensure_capacity(int r) {
    if (r <= index_.capacity()) return;
    int cap = index_.capacity();
    while (cap < r) cap *= 2;
    index_.reset(cap);
    for (const auto& [size, cnt] : counts_) index_.add(size, cnt);
}

void PartitionState::apply_new_block() {
    ensure_capacity(1);
    ++counts_[1];
    index_.add(1, +1);
    ++k_;
    ++n_;
    if (max_size_ < 1) max_size_ = 1;
}

void PartitionState::apply_join(int r) {
    auto it = counts_.find(r);
    if (it == counts_.end() || it->second == 0)
        throw std::logic_error("PartitionState::apply_join: no block of that size");
    ensure_capacity(r + 1);  // grow (rebuild) before mutating, so deltas apply once
    if (--it->second == 0) counts_.erase(it);
    ++counts_[r + 1];
    index_.add(r, -1);
    index_.add(r + 1, +1);
    ++n_;
    if (max_size_ < r + 1) max_size_ = r + 1;
}

int PartitionState::sample_join(double target) const {
    int r = index_.find(target, m_.alpha);
    // Floating-point edge: a target at or beyond the total weight walks off
    // the end; the largest occupied class is the only sound answer.
    if (r > max_size_) r = max_size_;
    return r;
}

void PartitionState::check_invariants() const {
    long long sum_rk = 0, sum_k = 0;
    for (const auto& [size, cnt] : counts_) {
        if (cnt <= 0) throw std::logic_error("state invariant: nonpositive count stored");
        if (size < 1 || size > max_size_)
            throw std::logic_error("state invariant: size outside [1, max_size]");
        sum_rk += static_cast<long long>(size) * cnt;
        sum_k += cnt;
    }
    if (sum_rk != n_) throw std::logic_error("state invariant: sum r K_r != n");
    if (sum_k != k_) throw std::logic_error("state invariant: sum K_r != K");
    if (index_.total_size() != n_ || index_.total_count() != k_)
        throw std::logic_error("state invariant: weight index out of sync");
    auto [s1, s2] = index_.prefix(index_.capacity());
    if (s1 != n_ || s2 != k_)
        throw std::logic_error("state invariant: weight index prefix mismatch");
    // Block sizes never shrink, so the largest occupied class and the
    // cached maximum must agree exactly; an undershoot would make
    // sample_join truncate to the wrong class.
    if (n_ > 0 && counts_.rbegin()->first != max_size_)
        throw std::logic_error("state invariant: cached max size is stale");
    double total_weight = static_cast<double>(index_.total_size()) -
                          m_.alpha * static_cast<double>(index_.total_count());
    double expect = static_cast<double>(n_) - m_.alpha * static_cast<double>(k_);
    if (std::abs(total_weight - expect) > 1e-9)
        throw std::logic_error("state invariant: total weight != n - alpha K");
}

Sampler::Sampler(const Model& m, std::uint64_t seed, std::uint64_t trajectory)
    : state_(m), rng_(Rng::stream(seed, trajectory)) {}

StepOutcome Sampler::step() {
    if (state_.n() == 0) {
        state_.apply_new_block();
        return {true, 0};
    }
    const Model& m = state_.model();
    double u = rng_.uniform() * (static_cast<double>(state_.n()) + m.theta);
    double c = m.alpha * static_cast<double>(state_.k()) + m.theta;
    if (u < c) {
        state_.apply_new_block();
        return {true, 0};
    }
    int r = state_.sample_join(u - c);
    state_.apply_join(r);
    return {false, r};
}

void Sampler::run_to(long long n_target) {
    while (state_.n() < n_target) step();
}

}  // namespace ep
