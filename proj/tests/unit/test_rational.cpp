#include <gtest/gtest.h>

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ssfm/rational.hpp"

using ssfm::Rational;

TEST(Rational, ParsesIntegersAndFractions) {
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("-7"), Rational(-7));
    EXPECT_EQ(Rational::parse("+2/4"), Rational(1, 2));
    EXPECT_EQ(Rational::parse("6/3"), Rational(2));
    EXPECT_EQ(Rational::parse("0/5"), Rational(0));
}

TEST(Rational, RejectsMalformedText) {
    for (const char* bad : {"", "1.5", "1/", "/2", "a", "1/-2", "1 /2", "1/0", "--1", "1e3"}) {
        EXPECT_THROW((void)Rational::parse(bad), std::invalid_argument) << bad;
    }
}

TEST(Rational, RendersLowestTermsWithIntegerShortForm) {
    EXPECT_EQ(Rational(2, 4).str(), "1/2");
    EXPECT_EQ(Rational(3, -6).str(), "-1/2");
    EXPECT_EQ(Rational(4, 2).str(), "2");
    EXPECT_EQ(Rational(0, 9).str(), "0");
    EXPECT_EQ(Rational(-5, 10).numerator_str(), "-1");
    EXPECT_EQ(Rational(-5, 10).denominator_str(), "2");
}

TEST(Rational, ZeroDenominatorAndDivisionThrow) {
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    Rational r(1);
    EXPECT_THROW(r /= Rational(0), std::domain_error);
}

TEST(Rational, OrderingAndPredicates) {
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
    EXPECT_TRUE(Rational(4, 2).is_integer());
    EXPECT_FALSE(Rational(3, 2).is_integer());
    EXPECT_EQ(Rational(-3, 2).sign(), -1);
    EXPECT_TRUE(Rational(0, 7).is_zero());
    EXPECT_EQ(-Rational(1, 2), Rational(-1, 2));
}

TEST(Rational, ArithmeticIdentities) {
    const Rational a(2, 3);
    const Rational b(-5, 7);
    EXPECT_EQ(a + b, Rational(-1, 21));
    EXPECT_EQ(a - b, Rational(29, 21));
    EXPECT_EQ(a * b, Rational(-10, 21));
    EXPECT_EQ(a / b, Rational(-14, 15));
    EXPECT_EQ((a + b) - b, a);
}

TEST(Rational, RoundTripsThroughText) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto n = static_cast<std::int64_t>(rng() % 2001) - 1000;
        const auto d = static_cast<std::int64_t>(rng() % 999) + 1;
        const Rational r(n, d);
        EXPECT_EQ(Rational::parse(r.str()), r);
    }
}

// Cross-multiplication oracle: a/b + c/d = (ad + cb)/(bd), reduced by gcd
// on plain 64-bit integers.
TEST(Rational, AdditionMatchesCrossMultiplication) {
    std::mt19937_64 rng(20240917);
    for (int i = 0; i < 1000; ++i) {
        const auto a = static_cast<std::int64_t>(rng() % 200001) - 100000;
        const auto b = static_cast<std::int64_t>(rng() % 100000) + 1;
        const auto c = static_cast<std::int64_t>(rng() % 200001) - 100000;
        const auto d = static_cast<std::int64_t>(rng() % 100000) + 1;
        std::int64_t num = a * d + c * b;
        std::int64_t den = b * d;
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num /= g;
        den /= g;
        const Rational sum = Rational(a, b) + Rational(c, d);
        ASSERT_EQ(sum.numerator_str(), std::to_string(num)) << a << "/" << b << " + " << c << "/" << d;
        ASSERT_EQ(sum.denominator_str(), std::to_string(den));
    }
}
