#include "martingale.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "partition.hpp"

namespace ep::mart {

using exact::BKind;
using exact::log_b;

double beta_kn(const Model& m, long long n) {
    return 1.0 + m.alpha / (static_cast<double>(n) + m.theta);
}

double beta_rn(const Model& m, int r, long long n) {
    if (n < r) return 1.0;
    return (static_cast<double>(n - r) + m.theta + m.alpha) / (static_cast<double>(n) + m.theta);
}

double p_new_block(const Model& m, long long n, long long k) {
    if (n == 0) return 1.0;
    return (m.alpha * static_cast<double>(k) + m.theta) / (static_cast<double>(n) + m.theta);
}

double p_gain(const Model& m, int r, long long n, long long k, long long k_rm1) {
    if (r == 1) return p_new_block(m, n, k);
    return (static_cast<double>(r - 1) - m.alpha) * static_cast<double>(k_rm1) /
           (static_cast<double>(n) + m.theta);
}

double q_loss(const Model& m, int r, long long n, long long k_r) {
    return (static_cast<double>(r) - m.alpha) * static_cast<double>(k_r) /
           (static_cast<double>(n) + m.theta);
}

double m_value(const Model& m, long long n, long long k) {
    m.require_positive_alpha("m_value");
    return std::exp(log_b(m, BKind::plain, n)) * (static_cast<double>(k) + m.theta / m.alpha);
}

double identity_residual_kn(const Model& m, long long n, long long k) {
    m.require_positive_alpha("identity_residual_kn");
    double b_n = std::exp(log_b(m, BKind::plain, n));
    // Deriving b_{n+1} from b_n keeps the shared factor exact, so the
    // residual reflects only the algebraic identity, not two independent
    // log-gamma evaluations.
    double b_n1 = b_n * (static_cast<double>(n) + m.theta) /
                  (static_cast<double>(n) + m.alpha + m.theta);
    double p = p_new_block(m, n, k);
    double ta = m.theta / m.alpha;
    double kd = static_cast<double>(k);
    double expected = p * (b_n1 * (kd + 1.0 + ta)) + (1.0 - p) * (b_n1 * (kd + ta));
    return expected - b_n * (kd + ta);
}

double identity_residual_krn(const Model& m, int r, long long n, long long k, long long k_r,
                             long long k_rm1, double a_center) {
    m.require_positive_alpha("identity_residual_krn");
    double ratio = beta_rn(m, r, n);  // b_{r,n}/b_{r,n+1}
    double p = p_gain(m, r, n, k, k_rm1);
    double q = q_loss(m, r, n, k_r);
    double a_next = ratio * a_center + p;
    double krd = static_cast<double>(k_r);
    double expected = (krd + (p - q)) - a_next;  // E[M_{r,n+1}|F_n] / b_{r,n+1}
    double current = ratio * (krd - a_center);   // M_{r,n} / b_{r,n+1}
    return expected - current;
}

double qv_increment_kn(const Model& m, long long n, long long k) {
    m.require_positive_alpha("qv_increment_kn");
    double b_n1 = std::exp(log_b(m, BKind::plain, n + 1));
    double p = p_new_block(m, n, k);
    return b_n1 * b_n1 * p * (1.0 - p);
}

double qv_increment_krn_scaled(const Model& m, int r, long long n, long long k, long long k_r,
                               long long k_rm1) {
    m.require_positive_alpha("qv_increment_krn");
    double p = p_gain(m, r, n, k, k_rm1);
    double q = q_loss(m, r, n, k_r);
    return p + q - (p - q) * (p - q);
}

double qv_increment_krn(const Model& m, int r, long long n, long long k, long long k_r,
                        long long k_rm1) {
    double b_rn1 = std::exp(log_b(m, BKind::size_r, n + 1, r));
    return b_rn1 * b_rn1 * qv_increment_krn_scaled(m, r, n, k, k_r, k_rm1);
}

namespace {

double fourth_kn_poly(const Model& m, long long n, long long k) {
    double nd = static_cast<double>(n), t = m.theta, a = m.alpha;
    double kd = static_cast<double>(k);
    double d4 = (nd + t) * (nd + t) * (nd + t) * (nd + t);
    double e0 = nd * t * (nd * nd - nd * t + t * t) / d4;
    double e1 = a * (nd - t) * (nd * nd - 4.0 * nd * t + t * t) / d4;
    double e2 = -2.0 * a * a * (2.0 * nd - t) * (nd - 2.0 * t) / d4;
    double e3 = 6.0 * a * a * a * (nd - t) / d4;
    double e4 = -3.0 * a * a * a * a / d4;
    return e0 + kd * (e1 + kd * (e2 + kd * (e3 + kd * e4)));
}

double fourth_krn_poly(double p, double q) {
    double s = p + q, d = p - q;
    return s - 4.0 * d * d + 6.0 * s * d * d - 3.0 * d * d * d * d;
}

double fourth_krn_brute_poly(double p, double q) {
    double mu = p - q;  // conditional mean of the size-class increment
    double up = 1.0 - mu, down = -1.0 - mu;
    return p * up * up * up * up + q * down * down * down * down +
           (1.0 - p - q) * mu * mu * mu * mu;
}

}  // namespace

double fourth_increment_kn(const Model& m, long long n, long long k) {
    m.require_positive_alpha("fourth_increment_kn");
    double b_n1 = std::exp(log_b(m, BKind::plain, n + 1));
    double b2 = b_n1 * b_n1;
    return b2 * b2 * fourth_kn_poly(m, n, k);
}

double fourth_increment_kn_brute(const Model& m, long long n, long long k) {
    m.require_positive_alpha("fourth_increment_kn_brute");
    double b_n1 = std::exp(log_b(m, BKind::plain, n + 1));
    double b2 = b_n1 * b_n1;
    double p = p_new_block(m, n, k);
    double up = 1.0 - p;
    return b2 * b2 * (p * up * up * up * up + up * p * p * p * p);
}

double fourth_increment_krn_scaled(const Model& m, int r, long long n, long long k,
                                   long long k_r, long long k_rm1) {
    m.require_positive_alpha("fourth_increment_krn");
    return fourth_krn_poly(p_gain(m, r, n, k, k_rm1), q_loss(m, r, n, k_r));
}

double fourth_increment_krn_brute_scaled(const Model& m, int r, long long n, long long k,
                                         long long k_r, long long k_rm1) {
    m.require_positive_alpha("fourth_increment_krn_brute");
    return fourth_krn_brute_poly(p_gain(m, r, n, k, k_rm1), q_loss(m, r, n, k_r));
}

double fourth_increment_krn(const Model& m, int r, long long n, long long k, long long k_r,
                            long long k_rm1) {
    double b_rn1 = std::exp(log_b(m, BKind::size_r, n + 1, r));
    double b2 = b_rn1 * b_rn1;
    return b2 * b2 * fourth_increment_krn_scaled(m, r, n, k, k_r, k_rm1);
}

double fourth_increment_krn_brute(const Model& m, int r, long long n, long long k,
                                  long long k_r, long long k_rm1) {
    double b_rn1 = std::exp(log_b(m, BKind::size_r, n + 1, r));
    double b2 = b_rn1 * b_rn1;
    return b2 * b2 * fourth_increment_krn_brute_scaled(m, r, n, k, k_r, k_rm1);
}

ACenter::ACenter(int r) : r_(r) {
    if (r < 1) throw std::invalid_argument("ACenter: size class must be >= 1");
}

void ACenter::update(const Model& m, long long n, long long k, long long k_rm1) {
    m.require_positive_alpha("ACenter::update");
    if (n != next_n_)
        throw std::logic_error("ACenter::update: transitions must be applied in order");
    value_ = beta_rn(m, r_, n) * value_ + p_gain(m, r_, n, k, k_rm1);
    ++next_n_;
}

double s_hat(long long k_at_horizon, long long horizon, double alpha) {
    return static_cast<double>(k_at_horizon) /
           std::pow(static_cast<double>(horizon), alpha);
}

long long s_hat_horizon(long long n, double alpha) {
    if (alpha <= 0.0) throw std::domain_error("s_hat_horizon: requires alpha > 0");
    const long long cap = 100000000;  // 10^8
    double e = std::ceil(2.0 / alpha);
    if (e >= 9.0) return cap;
    long long pw = 1;
    for (int i = 0; i < static_cast<int>(e); ++i) pw *= 10;
    if (n >= cap / pw + 1) return cap;
    long long horizon = n * pw;
    return horizon < cap ? horizon : cap;
}

double clt_self_kn(long long n, long long k, double alpha, double s_hat_value) {
    double na = std::pow(static_cast<double>(n), alpha);
    return (static_cast<double>(k) - na * s_hat_value) / std::sqrt(static_cast<double>(k));
}

double clt_mixed_kn(long long n, long long k, double alpha, double s_hat_value) {
    double na = std::pow(static_cast<double>(n), alpha);
    return std::sqrt(na) * (static_cast<double>(k) / na - s_hat_value);
}

std::optional<double> clt_self_krn(long long k_r, double a_center) {
    if (k_r <= 0) return std::nullopt;
    return (static_cast<double>(k_r) - a_center) / std::sqrt(static_cast<double>(k_r));
}

double clt_mixed_krn(long long n, long long k_r, double a_center, double alpha) {
    double na = std::pow(static_cast<double>(n), alpha);
    return (static_cast<double>(k_r) - a_center) / std::sqrt(na);
}

std::vector<long long> lil_checkpoints(long long horizon) {
    std::vector<long long> out;
    double x = 16.0;
    while (true) {
        long long n = static_cast<long long>(std::ceil(x));
        if (n > horizon) break;
        if (out.empty() || out.back() != n) out.push_back(n);
        x *= 1.5;
    }
    return out;
}

double lil_ratio_kn(long long n, long long k, double alpha, double s_hat_value) {
    if (n < 3) throw std::domain_error("lil_ratio_kn: needs n >= 3 for log log n > 0");
    double na = std::pow(static_cast<double>(n), alpha);
    double dev = static_cast<double>(k) - na * s_hat_value;
    return dev * dev / (2.0 * na * std::log(std::log(static_cast<double>(n))));
}

double lil_ratio_krn(long long n, long long k_r, double a_center, double alpha) {
    if (n < 3) throw std::domain_error("lil_ratio_krn: needs n >= 3 for log log n > 0");
    double na = std::pow(static_cast<double>(n), alpha);
    double dev = static_cast<double>(k_r) - a_center;
    return dev * dev / (2.0 * na * std::log(std::log(static_cast<double>(n))));
}

double alpha_estimate(long long k1, long long k) {
    if (k <= 0) throw std::domain_error("alpha_estimate: requires K_n > 0");
    return static_cast<double>(k1) / static_cast<double>(k);
}

std::vector<TrajectoryRecord> instrumented_trajectory(const Model& m, std::uint64_t seed,
                                                      std::uint64_t trajectory,
                                                      const std::vector<long long>& checkpoints,
                                                      const std::vector<int>& tracked_r) {
    m.require_positive_alpha("instrumented_trajectory");
    if (checkpoints.empty())
        throw std::invalid_argument("instrumented_trajectory: needs at least one checkpoint");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw std::invalid_argument(
                "instrumented_trajectory: checkpoints must be increasing and >= 1");
    }
    const long long horizon = checkpoints.back();
    if (horizon > 100000000)
        throw std::invalid_argument("instrumented_trajectory: horizon above 10^8");
    for (int r : tracked_r)
        if (r < 1) throw std::invalid_argument("instrumented_trajectory: tracked size < 1");

    struct Track {
        int r;
        ACenter center;
        double qv_pred = 0.0;  // units of b_{r,n}^2
        double qv_real = 0.0;
    };
    std::vector<Track> tracks;
    tracks.reserve(tracked_r.size());
    for (int r : tracked_r) tracks.push_back({r, ACenter(r), 0.0, 0.0});

    Sampler sampler(m, seed, trajectory);
    sampler.step();  // deterministic first block, nothing to instrument

    std::vector<TrajectoryRecord> records;
    records.reserve(checkpoints.size());
    const double ta = m.theta / m.alpha;
    double b_next = 1.0;  // running b_{n+1}, resynced periodically
    double qv_pred_kn = 0.0, qv_real_kn = 0.0;
    std::size_t next_cp = 0;

    auto emit = [&](long long n) {
        TrajectoryRecord rec;
        rec.trajectory = trajectory;
        rec.n = n;
        rec.k = sampler.k();
        rec.log_b_n = log_b(m, BKind::plain, n);
        rec.m_n = std::exp(rec.log_b_n) * (static_cast<double>(rec.k) + ta);
        rec.qv_pred_kn = qv_pred_kn;
        rec.qv_real_kn = qv_real_kn;
        rec.s_hat_value =
            n == horizon ? s_hat(sampler.k(), horizon, m.alpha)
                         : std::numeric_limits<double>::quiet_NaN();
        for (const Track& t : tracks) {
            SizeClassTrack s;
            s.r = t.r;
            s.k_r = sampler.state().count(t.r);
            s.log_b_rn = log_b(m, BKind::size_r, n, t.r);
            s.a_center = t.center.value();
            s.m_scaled = static_cast<double>(s.k_r) - s.a_center;
            s.qv_pred = t.qv_pred;
            s.qv_real = t.qv_real;
            rec.tracks.push_back(s);
        }
        records.push_back(std::move(rec));
    };

    while (next_cp < checkpoints.size() && checkpoints[next_cp] == sampler.n()) {
        emit(sampler.n());
        ++next_cp;
    }

    while (sampler.n() < horizon) {
        const long long n = sampler.n();
        const long long k = sampler.k();
        const double p = p_new_block(m, n, k);

        // scale for the step n -> n+1
        if ((n & 0xFFFF) == 0) b_next = std::exp(log_b(m, BKind::plain, n));
        b_next *= (static_cast<double>(n) + m.theta) /
                  (static_cast<double>(n) + m.alpha + m.theta);
        qv_pred_kn += b_next * b_next * p * (1.0 - p);

        struct Pending {
            double p, q, ratio;
            long long k_r;
        };
        // per-track ingredients must be read before the state mutates
        std::vector<Pending> pend(tracks.size());
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            Track& t = tracks[i];
            long long k_r = sampler.state().count(t.r);
            long long k_rm1 = t.r >= 2 ? sampler.state().count(t.r - 1) : 0;
            pend[i] = {p_gain(m, t.r, n, k, k_rm1), q_loss(m, t.r, n, k_r), beta_rn(m, t.r, n),
                       k_r};
            t.center.update(m, n, k, k_rm1);
        }

        StepOutcome out = sampler.step();
        double xi = out.new_block ? 1.0 : 0.0;
        qv_real_kn += b_next * b_next * (xi - p) * (xi - p);

        for (std::size_t i = 0; i < tracks.size(); ++i) {
            Track& t = tracks[i];
            const Pending& pd = pend[i];
            double mu = pd.p - pd.q;
            double dk;
            if (out.new_block)
                dk = t.r == 1 ? 1.0 : 0.0;
            else if (out.joined_r == t.r - 1)
                dk = 1.0;
            else if (out.joined_r == t.r)
                dk = -1.0;
            else
                dk = 0.0;
            // rescale the running sums from units of b_{r,n}^2 to b_{r,n+1}^2
            double rr = pd.ratio * pd.ratio;
            t.qv_pred = rr * t.qv_pred + (pd.p + pd.q - mu * mu);
            t.qv_real = rr * t.qv_real + (dk - mu) * (dk - mu);
        }

        while (next_cp < checkpoints.size() && checkpoints[next_cp] == sampler.n()) {
            emit(sampler.n());
            ++next_cp;
        }
    }
    return records;
}

}  // namespace ep::mart
