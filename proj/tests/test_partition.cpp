#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "chain.hpp"
#include "exact.hpp"
#include "fenwick.hpp"
#include "oracles.hpp"
#include "partition.hpp"
#include "stats.hpp"

using namespace ep;

namespace {

const std::vector<std::pair<double, double>> kGrid = {
    {0.3, -0.1}, {0.3, 0.0}, {0.3, 1.0},
    {0.5, -0.1}, {0.5, 0.0}, {0.5, 1.0},
    {0.8, -0.1}, {0.8, 0.0}, {0.8, 1.0},
};

std::vector<int> descending_sizes(const PartitionState& st) {
    std::vector<int> sizes;
    for (const auto& [size, cnt] : st.counts())
        for (long long i = 0; i < cnt; ++i) sizes.push_back(size);
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

}  // namespace

TEST_CASE("weight index: prefix sums and queries match a linear scan") {
    WeightIndex idx(8);
    // size counts: K_1 = 3, K_2 = 1, K_5 = 2
    idx.add(1, 3);
    idx.add(2, 1);
    idx.add(5, 2);
    CHECK(idx.total_size() == 3 + 2 + 10);
    CHECK(idx.total_count() == 6);
    CHECK(idx.prefix(1) == std::pair<std::int64_t, std::int64_t>{3, 3});
    CHECK(idx.prefix(4) == std::pair<std::int64_t, std::int64_t>{5, 4});
    CHECK(idx.prefix(8) == std::pair<std::int64_t, std::int64_t>{15, 6});

    const double alpha = 0.5;
    // cumulative weights: size 1 -> 1.5, size 2 -> 3.0, size 5 -> 12.0
    auto expected = [&](double target) {
        double cum1 = (1 - alpha) * 3, cum2 = cum1 + (2 - alpha) * 1,
               cum5 = cum2 + (5 - alpha) * 2;
        if (target < cum1) return 1;
        if (target < cum2) return 2;
        if (target < cum5) return 5;
        return 9;  // off the end
    };
    for (double t = 0.0; t < 12.5; t += 0.0625) CHECK(idx.find(t, alpha) == expected(t));
    CHECK(idx.find(11.999999, alpha) == 5);
    CHECK(idx.find(12.0, alpha) == 9);  // at-total edge walks off the end

    idx.add(5, -1);
    CHECK(idx.total_size() == 10);
    CHECK(idx.find(5.9, alpha) == 5);
}

TEST_CASE("new state and the forced first step") {
    for (auto [a, t] : kGrid) {
        Model m(a, t);
        PartitionState st(m);
        CHECK(st.n() == 0);
        CHECK(st.k() == 0);
        CHECK(st.new_block_prob() == 1.0);
        st.apply_new_block();
        CHECK(st.n() == 1);
        CHECK(st.k() == 1);
        CHECK(st.count(1) == 1);
        st.check_invariants();
    }
    // after one step the total sampling weight is 1 - alpha
    Model m(0.5, 0.5);
    Sampler s(m, 7, 0);
    s.step();
    CHECK(s.state().n() == 1);
    CHECK(s.state().join_prob(1) == doctest::Approx((1 - 0.5) / 1.5).epsilon(1e-15));
}

TEST_CASE("transition probabilities: worked examples and exact normalization") {
    Model m(0.5, 0.5);
    PartitionState st(m);
    st.apply_new_block();
    CHECK(st.new_block_prob() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(st.join_prob(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    Model m2(0.5, 0.0);
    PartitionState st2(m2);
    st2.apply_new_block();
    st2.apply_join(1);  // one block of size 2
    CHECK(st2.n() == 2);
    CHECK(st2.count(2) == 1);
    CHECK(st2.new_block_prob() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(st2.join_prob(2) == doctest::Approx(0.75).epsilon(1e-15));

    // p_new + sum_r p_join(r) = 1 along random trajectories, every grid point
    for (auto [a, t] : kGrid) {
        Model mm(a, t);
        Sampler s(mm, 11, 3);
        for (int i = 0; i < 2000; ++i) s.step();
        double total = s.state().new_block_prob();
        for (const auto& [r, cnt] : s.state().counts()) {
            (void)cnt;
            total += s.state().join_prob(r);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("state invariants hold along trajectories, including index growth") {
    for (auto [a, t] : kGrid) {
        Model m(a, t);
        Sampler s(m, 42, 1);
        for (int i = 0; i < 20000; ++i) {
            s.step();
            if ((i & 1023) == 0) s.state().check_invariants();
        }
        s.state().check_invariants();
        CHECK(s.n() == 20000);
        // the index capacity started at 64; big blocks must have forced growth
        // at small alpha where a giant block dominates
        CHECK(s.state().max_size() >= 1);
    }
    // alpha = 0 (no discount) grows one dominant block quickly
    Model ewens(0.0, 1.0);
    Sampler s0(ewens, 5, 0);
    for (int i = 0; i < 5000; ++i) s0.step();
    s0.state().check_invariants();
    CHECK(s0.state().max_size() > 64);  // exercised WeightIndex growth
}

TEST_CASE("join bookkeeping moves one count between adjacent classes") {
    Model m(0.5, 0.5);
    PartitionState st(m);
    st.apply_new_block();
    st.apply_new_block();
    REQUIRE(st.count(1) == 2);
    st.apply_join(1);
    CHECK(st.count(1) == 1);
    CHECK(st.count(2) == 1);
    CHECK(st.k() == 2);
    CHECK(st.n() == 3);
    st.check_invariants();
    CHECK_THROWS_AS(st.apply_join(5), std::logic_error);
}

TEST_CASE("sample_join matches a direct scan of the cumulative weights") {
    Model m(0.3, -0.1);
    Sampler s(m, 99, 7);
    for (int i = 0; i < 3000; ++i) s.step();
    const PartitionState& st = s.state();
    double total = static_cast<double>(st.n()) - m.alpha * static_cast<double>(st.k());
    for (int i = 0; i <= 400; ++i) {
        double target = total * (static_cast<double>(i) + 0.5) / 401.0;
        int got = st.sample_join(target);
        // linear reference scan
        double acc = 0.0;
        int want = 0;
        for (const auto& [r, cnt] : st.counts()) {
            acc += (static_cast<double>(r) - m.alpha) * static_cast<double>(cnt);
            if (target < acc) {
                want = r;
                break;
            }
        }
        REQUIRE(want != 0);
        CHECK(got == want);
    }
}

TEST_CASE("determinism: same stream same trajectory, distinct streams differ") {
    Model m(0.5, 0.5);
    Sampler a(m, 123, 9), b(m, 123, 9), c(m, 123, 10), d(m, 124, 9);
    for (int i = 0; i < 5000; ++i) {
        a.step();
        b.step();
        c.step();
        d.step();
    }
    CHECK(a.k() == b.k());
    CHECK(a.state().counts() == b.state().counts());
    bool differs_traj = a.k() != c.k() || a.state().counts() != c.state().counts();
    bool differs_seed = a.k() != d.k() || a.state().counts() != d.state().counts();
    CHECK(differs_traj);
    CHECK(differs_seed);
}

TEST_CASE("lumped walker reproduces the full sampler's tracked coordinates") {
    // Both engines consume one uniform per step and resolve it against the
    // same ascending cumulative weights, so given equal streams the block
    // count and every tracked class must agree exactly.
    for (auto [a, t] : kGrid) {
        Model m(a, t);
        Sampler full(m, 2024, 5);
        TrackedChain lumped(m, 4, 2024, 5);
        for (int i = 0; i < 10000; ++i) {
            full.step();
            lumped.step();
        }
        CHECK(full.k() == lumped.k());
        for (int r = 1; r <= 4; ++r) CHECK(full.state().count(r) == lumped.k_r(r));
    }
}

TEST_CASE("k-only fast path is stream-equivalent to stepping") {
    for (auto [a, t] : kGrid) {
        Model m(a, t);
        TrackedChain stepped(m, 0, 77, 2), fast(m, 0, 77, 2);
        stepped.run_to(30000);
        fast.run_to_k_only(30000);
        CHECK(stepped.k() == fast.k());
        CHECK(stepped.n() == fast.n());
    }
}

TEST_CASE("empirical transition frequency from a fixed state") {
    // From n=1 the next step opens a block with probability 2/3.
    Model m(0.5, 0.5);
    const int trials = 1000000;
    int new_blocks = 0;
    for (int i = 0; i < trials; ++i) {
        Sampler s(m, 31337, static_cast<std::uint64_t>(i));
        s.step();
        StepOutcome out = s.step();
        if (out.new_block) ++new_blocks;
    }
    double freq = static_cast<double>(new_blocks) / trials;
    double se = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / trials);
    CHECK(std::abs(freq - 2.0 / 3.0) <= 4.0 * se);
}

TEST_CASE("empirical block-count law at n=100 matches the exact distribution") {
    const int n = 100, trials = 100000;
    for (auto [a, t] : {std::pair{0.5, 0.5}, std::pair{0.3, -0.1}}) {
        Model m(a, t);
        std::vector<long long> observed(n + 1, 0);
        for (int i = 0; i < trials; ++i) {
            Sampler s(m, 555, static_cast<std::uint64_t>(i));
            s.run_to(n);
            ++observed[s.k()];
        }
        std::vector<double> probs = exact::exact_dist_kn(m, n);
        std::vector<long long> obs_cells(observed.begin() + 1, observed.end());
        auto res = stats::chi2_test(obs_cells, probs);
        INFO("alpha=", a, " theta=", t, " chi2=", res.statistic, " df=", res.df);
        CHECK(res.p_value > 0.001);
    }
}

TEST_CASE("ewens case (alpha = 0): sampler law matches the forward recursion") {
    const int n = 50, trials = 60000;
    Model m(0.0, 1.0);
    std::vector<long long> observed(n + 1, 0);
    for (int i = 0; i < trials; ++i) {
        Sampler s(m, 777, static_cast<std::uint64_t>(i));
        s.run_to(n);
        ++observed[s.k()];
    }
    std::vector<double> probs = oracle::dp_dist_kn(m, n);
    std::vector<long long> obs_cells(observed.begin() + 1, observed.end());
    auto res = stats::chi2_test(obs_cells, probs);
    INFO("chi2=", res.statistic, " df=", res.df);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("small-n joint partition frequencies track the enumeration oracle") {
    const int n = 5, trials = 200000;
    Model m(0.5, 0.5);
    auto cells = oracle::enumerate_joint(m, n);
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i].sizes] = static_cast<int>(i);
    std::vector<long long> counts(cells.size(), 0);
    for (int i = 0; i < trials; ++i) {
        Sampler s(m, 909, static_cast<std::uint64_t>(i));
        s.run_to(n);
        auto it = index.find(descending_sizes(s.state()));
        REQUIRE(it != index.end());
        ++counts[it->second];
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        double p = cells[c].prob;
        double freq = static_cast<double>(counts[c]) / trials;
        double se = std::sqrt(p * (1.0 - p) / trials);
        INFO("cell ", c, " p=", p, " freq=", freq);
        CHECK(std::abs(freq - p) <= 5.0 * se);
    }
}

TEST_CASE("sampler checkpoint means match the closed-form block-count mean") {
    const long long n = 10000;
    const int trials = 2000;
    Model m(0.5, 0.5);
    double sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        TrackedChain c(m, 0, 4242, static_cast<std::uint64_t>(i));
        c.run_to(n);
        sum += static_cast<double>(c.k());
    }
    double mc = sum / trials;
    double ref = exact::mean_kn(m, n);
    // sd of K_n is near sqrt(Var) ~ 40 here; allow 4 standard errors
    double sd_bound = 60.0;
    CHECK(std::abs(mc - ref) <= 4.0 * sd_bound / std::sqrt(static_cast<double>(trials)));
}
