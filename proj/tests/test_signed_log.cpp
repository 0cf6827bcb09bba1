#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "signed_log.hpp"

using ep::SignedLog;

TEST_CASE("construction and round trip") {
    CHECK(SignedLog::from_value(0.0).is_zero());
    CHECK(SignedLog::from_value(3.5).value() == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(SignedLog::from_value(-2.25).value() == doctest::Approx(-2.25).epsilon(1e-15));
    CHECK(SignedLog::from_value(-2.25).sign == -1);
    CHECK(SignedLog::one().value() == 1.0);
    CHECK(SignedLog::from_log(0.0).value() == 1.0);
}

TEST_CASE("multiplication and division track signs") {
    auto a = SignedLog::from_value(-4.0);
    auto b = SignedLog::from_value(0.5);
    CHECK((a * b).value() == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK((a / b).value() == doctest::Approx(-8.0).epsilon(1e-15));
    CHECK((a * SignedLog::zero()).is_zero());
    CHECK((-a).value() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("addition with matching signs") {
    auto v = SignedLog::from_value(1e300) + SignedLog::from_value(1e300);
    CHECK(v.lg == doctest::Approx(std::log(1e300) + std::log(2.0)).epsilon(1e-15));
    CHECK_FALSE(v.cancel_warn);
    auto w = SignedLog::from_value(-3.0) + SignedLog::from_value(-4.0);
    CHECK(w.value() == doctest::Approx(-7.0).epsilon(1e-15));
}

TEST_CASE("subtraction and cancellation flag") {
    auto mild = SignedLog::from_value(2.0) - SignedLog::from_value(1.0);
    CHECK(mild.value() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(mild.cancel_warn);

    // eleven digits lost
    auto close = SignedLog::from_value(1.0) - SignedLog::from_value(1.0 - 1e-11);
    CHECK(close.value() == doctest::Approx(1e-11).epsilon(1e-4));
    CHECK(close.cancel_warn);

    auto exact = SignedLog::from_value(5.0) - SignedLog::from_value(5.0);
    CHECK(exact.is_zero());
    CHECK(exact.cancel_warn);
}

TEST_CASE("flag is sticky through arithmetic") {
    auto tainted = SignedLog::from_value(1.0) - SignedLog::from_value(1.0 - 1e-12);
    auto chained = tainted * SignedLog::from_value(7.0) + SignedLog::from_value(1.0);
    CHECK(chained.cancel_warn);
}

TEST_CASE("zero plus x is x") {
    auto v = SignedLog::zero() + SignedLog::from_value(-9.0);
    CHECK(v.value() == doctest::Approx(-9.0).epsilon(1e-15));
}
