#include "doctest.h"

#include "csitdof/errors.hpp"
#include "csitdof/rational.hpp"

using csitdof::Rational;

TEST_CASE("parse and print") {
    CHECK(Rational::parse("6/8").str() == "3/4");
    CHECK(Rational::parse("2").str() == "2/1");
    CHECK(Rational::parse("-1/3").pretty() == "-1/3");
    CHECK(Rational::parse("4/2").pretty() == "2");
    CHECK(Rational(0).str() == "0/1");
    for (const char* bad : {"", "1/", "/2", "a", "1/0", "1.5", "1//2", " 1/2x"})
        CHECK_THROWS_AS(Rational::parse(bad), csitdof::ParseError);
}

TEST_CASE("arithmetic stays canonical") {
    const Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(a > b);
    CHECK(csitdof::abs(Rational(-2, 5)) == Rational(2, 5));
    CHECK_THROWS_AS(a / Rational(0), csitdof::InvalidArgument);
    CHECK(Rational(2, 4).numerator() == 1);
    CHECK(Rational(2, 4).denominator() == 2);
    CHECK(Rational(3).is_integer());
    CHECK(Rational(3, 4).to_double() == doctest::Approx(0.75));
}

TEST_CASE("harmonic sums") {
    CHECK(csitdof::harmonic(1, 3) == Rational(11, 6));
    CHECK(csitdof::harmonic(2, 3) == Rational(5, 6));
    CHECK(csitdof::harmonic(4, 3) == Rational(0));
    CHECK(csitdof::harmonic(1, 6) == Rational(49, 20));
}
