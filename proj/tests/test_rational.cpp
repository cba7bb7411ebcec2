#include <catch2/catch.hpp>

#include "graphonlab/rational.hpp"
#include "graphonlab/scalar.hpp"

using namespace graphonlab;

TEST_CASE("rational arithmetic normalizes and is exact") {
    REQUIRE(Rational(2, 4) == Rational(1, 2));
    REQUIRE(Rational(-3, -6) == Rational(1, 2));
    REQUIRE(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    REQUIRE(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
    REQUIRE(Rational(1, 2) / Rational(1, 4) == Rational(2));
    REQUIRE(Rational(1, 3) < Rational(1, 2));
    REQUIRE(Rational(2, 3).pow(2) == Rational(4, 9));
    REQUIRE(Rational(1, 2).pow(-1) == Rational(2));
    REQUIRE_THROWS_AS(Rational(1, 0), std::domain_error);
    REQUIRE_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
}

TEST_CASE("rational parse accepts fractions, integers, decimals") {
    REQUIRE(Rational::parse("3/4") == Rational(3, 4));
    REQUIRE(Rational::parse("-7/2") == Rational(-7, 2));
    REQUIRE(Rational::parse("5") == Rational(5));
    REQUIRE(Rational::parse("0.75") == Rational(3, 4));
    REQUIRE(Rational::parse("-0.5") == Rational(-1, 2));
    REQUIRE(Rational::parse("0.3819660113") == Rational(3819660113LL, 10000000000LL));
}

TEST_CASE("rational overflow raises") {
    Rational big(INT64_MAX / 2, 1);
    REQUIRE_THROWS_AS(big * big, rational_overflow);
}

TEST_CASE("scalar carries exactness and degrades once") {
    Scalar a(Rational(1, 3));
    REQUIRE(a.exact());
    Scalar b = a * Scalar(3);
    REQUIRE(b.exact());
    REQUIRE(b == Scalar(1));
    Scalar c = a * Scalar::approx(0.5);
    REQUIRE_FALSE(c.exact());
    REQUIRE(c.value() == Approx(1.0 / 6));
    // Overflowing exact products fall back to floating values.
    Scalar big(Rational(INT64_MAX / 2));
    Scalar prod = big * big;
    REQUIRE_FALSE(prod.exact());
    REQUIRE(prod.value() == Approx(std::pow(static_cast<double>(INT64_MAX / 2), 2)));
}
