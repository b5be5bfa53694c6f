#include <doctest.h>

#include "helpers.hpp"

using ipm::Rational;
using testutil::q;

TEST_CASE("construction and canonical form") {
    CHECK(Rational(2, 4) == q(1, 2));
    CHECK(Rational(-2, -4) == q(1, 2));
    CHECK(Rational(2, -4) == q(-1, 2));
    CHECK(Rational(0, 5) == q(0));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("string parsing") {
    CHECK(Rational::from_string("5") == q(5));
    CHECK(Rational::from_string("-7/3") == q(-7, 3));
    CHECK(Rational::from_string("1.25") == q(5, 4));
    CHECK(Rational::from_string("-0.5") == q(-1, 2));
    CHECK_THROWS_AS(Rational::from_string("zebra"), std::domain_error);
    CHECK(q(-7, 3).str() == "-7/3");
    CHECK(q(4).str() == "4");
}

TEST_CASE("arithmetic is exact") {
    CHECK(q(1, 3) + q(1, 6) == q(1, 2));
    CHECK(q(1, 3) * q(3, 5) == q(1, 5));
    CHECK(q(1) / q(3) == q(1, 3));
    CHECK(-q(2, 7) == q(-2, 7));
    CHECK_THROWS_AS(q(1) / q(0), std::domain_error);
    CHECK(abs(q(-3, 4)) == q(3, 4));
}

TEST_CASE("pow") {
    CHECK(Rational::pow(q(2), 10) == q(1024));
    CHECK(Rational::pow(q(2, 3), 3) == q(8, 27));
    CHECK(Rational::pow(q(5), 0) == q(1));
}

TEST_CASE("ceil_sqrt returns the least integer whose square covers the input") {
    CHECK(Rational::ceil_sqrt(q(16)) == q(4));
    CHECK(Rational::ceil_sqrt(q(17)) == q(5));
    CHECK(Rational::ceil_sqrt(q(1, 4)) == q(1));
    CHECK(Rational::ceil_sqrt(q(0)) == q(0));
    CHECK_THROWS_AS(Rational::ceil_sqrt(q(-1)), std::domain_error);

    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(0, 1000000);
    for (int t = 0; t < 200; ++t) {
        Rational x(d(rng), 1 + d(rng) % 97);
        Rational r = Rational::ceil_sqrt(x);
        CHECK(r * r >= x);
        if (r >= q(1)) CHECK((r - q(1)) * (r - q(1)) < x);
    }
}

TEST_CASE("round_dyadic lands on the nearest multiple of 2^-bits") {
    CHECK(q(1, 3).round_dyadic(2) == q(1, 4));
    CHECK(q(5, 8).round_dyadic(2) == q(3, 4));  // tie goes away from zero
    CHECK(q(-5, 8).round_dyadic(2) == q(-3, 4));
    CHECK(q(7, 2).round_dyadic(4) == q(7, 2));

    std::mt19937 rng(11);
    std::uniform_int_distribution<long> d(-10000, 10000);
    for (int t = 0; t < 200; ++t) {
        Rational x(d(rng), 1 + std::abs(d(rng)) % 997);
        Rational r = x.round_dyadic(16);
        CHECK(abs(r - x) * Rational(1 << 17) <= q(1));
        CHECK((r * Rational(1 << 16)).is_integer());
    }
}

TEST_CASE("ceil_log2_abs") {
    CHECK(q(8).ceil_log2_abs() == 3);
    CHECK(q(9).ceil_log2_abs() == 4);
    CHECK(q(1).ceil_log2_abs() == 0);
    CHECK(q(1, 8).ceil_log2_abs() == -3);
    CHECK(q(3, 16).ceil_log2_abs() == -2);
    CHECK(q(-8).ceil_log2_abs() == 3);
    CHECK_THROWS_AS(q(0).ceil_log2_abs(), std::domain_error);
}

TEST_CASE("log_approx stays accurate outside binary64 range") {
    CHECK(q(1).log_approx() == doctest::Approx(0.0));
    CHECK(q(2).log_approx() == doctest::Approx(std::log(2.0)));
    Rational huge = Rational::pow(q(2), 5000);
    CHECK(huge.log_approx() == doctest::Approx(5000.0 * std::log(2.0)));
    Rational tiny = q(1) / huge;
    CHECK(tiny.log_approx() == doctest::Approx(-5000.0 * std::log(2.0)));
}

TEST_CASE("from_double_exact is exact for dyadics") {
    CHECK(Rational::from_double_exact(0.375) == q(3, 8));
    CHECK(Rational::from_double_exact(-2.0) == q(-2));
    CHECK_THROWS_AS(Rational::from_double_exact(1.0 / 0.0), std::domain_error);
}
