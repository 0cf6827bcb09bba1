#pragma once

#include <cmath>
#include <limits>

namespace ep {

// A real number stored as sign plus log of magnitude, so products of many
// large/small factors never overflow. Additions go through signed
// log-sum-exp; when two nearly equal terms of opposite sign cancel more
// than ten decimal digits the result carries a warning flag.
struct SignedLog {
    int sign = 0;                                            // -1, 0, +1
    double lg = -std::numeric_limits<double>::infinity();    // log|x|
    bool cancel_warn = false;

    SignedLog() = default;
    SignedLog(int s, double l, bool w = false) : sign(s), lg(l), cancel_warn(w) {
        if (sign == 0) lg = -std::numeric_limits<double>::infinity();
    }

    static SignedLog zero() { return SignedLog(); }
    static SignedLog one() { return SignedLog(1, 0.0); }

    static SignedLog from_value(double x) {
        if (x == 0.0) return zero();
        return SignedLog(x > 0 ? 1 : -1, std::log(std::fabs(x)));
    }

    // log(x) given x > 0
    static SignedLog from_log(double l) { return SignedLog(1, l); }

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(lg);
    }

    bool is_zero() const { return sign == 0; }

    SignedLog operator-() const { return SignedLog(-sign, lg, cancel_warn); }

    friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0 || b.sign == 0)
            return SignedLog(0, 0.0, a.cancel_warn || b.cancel_warn);
        return SignedLog(a.sign * b.sign, a.lg + b.lg, a.cancel_warn || b.cancel_warn);
    }

    friend SignedLog operator/(const SignedLog& a, const SignedLog& b) {
        // division by zero propagates an infinite magnitude; callers guard
        return SignedLog(a.sign * (b.sign == 0 ? 1 : b.sign),
                         a.lg - b.lg, a.cancel_warn || b.cancel_warn);
    }

    friend SignedLog operator+(const SignedLog& a, const SignedLog& b) {
        bool w = a.cancel_warn || b.cancel_warn;
        if (a.sign == 0) return SignedLog(b.sign, b.lg, w);
        if (b.sign == 0) return SignedLog(a.sign, a.lg, w);
        const SignedLog& big = a.lg >= b.lg ? a : b;
        const SignedLog& small = a.lg >= b.lg ? b : a;
        double d = small.lg - big.lg;   // <= 0
        if (a.sign == b.sign)
            return SignedLog(a.sign, big.lg + std::log1p(std::exp(d)), w);
        double m = std::exp(d);         // in [0, 1]
        if (m == 1.0) return SignedLog(0, 0.0, true);   // exact cancellation
        double l = big.lg + std::log1p(-m);
        if (big.lg - l > 10.0 * 2.302585092994046) w = true;   // lost > 10 digits
        return SignedLog(big.sign, l, w);
    }

    friend SignedLog operator-(const SignedLog& a, const SignedLog& b) { return a + (-b); }
};

}  // namespace ep
