#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ep {

// Fenwick pair over block-size classes. Index r carries the integer pair
// (r * K_r, K_r), so the sampling weight of a size-r class,
// (r - alpha) * K_r, is available on prefixes as sum1 - alpha * sum2 without
// storing any floating-point state. Both trees stay exactly synchronized
// with the size counts; the only rounding happens in the final comparison
// of a query.
class WeightIndex {
  public:
    explicit WeightIndex(int capacity = 64) { reset(capacity); }

    int capacity() const { return cap_; }

    void reset(int capacity) {
        if (capacity < 1) capacity = 1;
        cap_ = capacity;
        highbit_ = 1;
        while (highbit_ * 2 <= cap_) highbit_ *= 2;
        t1_.assign(static_cast<std::size_t>(cap_) + 1, 0);
        t2_.assign(static_cast<std::size_t>(cap_) + 1, 0);
        total1_ = 0;
        total2_ = 0;
    }

    void add(int r, std::int64_t count_delta) {
        if (r < 1 || r > cap_) throw std::out_of_range("WeightIndex::add: size out of range");
        std::int64_t d1 = static_cast<std::int64_t>(r) * count_delta;
        for (int i = r; i <= cap_; i += i & -i) {
            t1_[i] += d1;
            t2_[i] += count_delta;
        }
        total1_ += d1;
        total2_ += count_delta;
    }

    // (sum of r*K_r, sum of K_r) over sizes <= r
    std::pair<std::int64_t, std::int64_t> prefix(int r) const {
        std::int64_t s1 = 0, s2 = 0;
        if (r > cap_) r = cap_;
        for (int i = r; i > 0; i -= i & -i) {
            s1 += t1_[i];
            s2 += t2_[i];
        }
        return {s1, s2};
    }

    std::int64_t total_size() const { return total1_; }
    std::int64_t total_count() const { return total2_; }

    // Smallest size r whose cumulative weight sum_{j<=r} (j - alpha) K_j
    // exceeds target. Binary descent over the tree, one pass, no per-class
    // scan. Returns cap_ + 1 when target is at or above the total weight
    // (possible only through floating-point edge cases in the caller).
    int find(double target, double alpha) const {
        int pos = 0;
        std::int64_t acc1 = 0, acc2 = 0;
        for (int bit = highbit_; bit > 0; bit >>= 1) {
            int nxt = pos + bit;
            if (nxt > cap_) continue;
            double w = static_cast<double>(acc1 + t1_[nxt]) -
                       alpha * static_cast<double>(acc2 + t2_[nxt]);
            if (target >= w) {
                pos = nxt;
                acc1 += t1_[nxt];
                acc2 += t2_[nxt];
            }
        }
        return pos + 1;
    }

  private:
    std::vector<std::int64_t> t1_, t2_;
    std::int64_t total1_ = 0, total2_ = 0;
    int cap_ = 0;
    int highbit_ = 1;
};

}  // namespace ep
