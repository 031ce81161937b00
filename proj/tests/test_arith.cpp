#include <gtest/gtest.h>

#include "shifted_genus/arith.hpp"

using namespace shifted_genus;

TEST(Ord, IntegersAndRationals)
{
    EXPECT_EQ(ord(2, 8), extended_valuation(3));
    EXPECT_TRUE(ord(5, 0).is_infinite());
    EXPECT_EQ(ord(3, rational(10, 9)), extended_valuation(-2));
    EXPECT_EQ(ord(7, -49), extended_valuation(2));
    EXPECT_TRUE(ord(3, rational(0)).is_infinite());
}

TEST(Ord, ExtendedArithmetic)
{
    const auto inf = extended_valuation::infinity();
    EXPECT_TRUE((inf + extended_valuation(3)).is_infinite());
    EXPECT_LT(extended_valuation(100), inf);
    EXPECT_EQ(min(inf, extended_valuation(2)), extended_valuation(2));
    EXPECT_THROW((void)inf.value(), std::logic_error);
}

TEST(Eta, Examples)
{
    EXPECT_EQ(eta(7, 2), 1);
    EXPECT_EQ(eta(5, 3), -1);
    EXPECT_EQ(eta(5, 10), -5);
    EXPECT_EQ(eta(3, -1), -1);
    EXPECT_EQ(eta(5, -1), 1);
    EXPECT_THROW(eta(2, 3), std::invalid_argument);
}

TEST(Eta, AgreesWithSquareTableAndIsMultiplicativeOnUnits)
{
    for (std::int64_t p : {3, 5, 7, 11, 13}) {
        std::vector<bool> square(static_cast<std::size_t>(p), false);
        for (std::int64_t x = 1; x < p; ++x)
            square[static_cast<std::size_t>(x * x % p)] = true;
        for (std::int64_t a = 1; a < p; ++a) {
            EXPECT_EQ(eta(p, a), square[static_cast<std::size_t>(a)] ? 1 : -1) << "p=" << p << " a=" << a;
            for (std::int64_t b = 1; b < p; ++b)
                EXPECT_EQ(eta(p, a * b), eta(p, a) * eta(p, b));
        }
    }
}

TEST(Padic, ConstructionAndPrinting)
{
    const padic x(3, 4, 18);
    EXPECT_EQ(x.valuation(), 2);
    EXPECT_EQ(x.to_string(), "2*3^2 (mod 3^4)");
    EXPECT_EQ(padic(5, 3, 0).to_string(), "0 (mod 5^3)");
    EXPECT_EQ(padic(2, 5, -1).residue(), 31u);
    const padic q(5, 4, rational(3, 4));
    EXPECT_EQ((q * 4).residue(), 3u);
    EXPECT_THROW(padic(5, 4, rational(1, 5)), std::domain_error);
}

TEST(Padic, ArithmeticTakesMinimumPrecision)
{
    const padic a(7, 5, 10), b(7, 3, 4);
    const padic s = a + b;
    EXPECT_EQ(s.precision(), 3);
    EXPECT_EQ(s.residue(), 14u);
    EXPECT_TRUE(congruent(a * b, padic(7, 3, 40)));
    EXPECT_TRUE((a - a).is_zero());
}

TEST(Padic, InverseAndExactDivision)
{
    const padic u(2, 10, 3);
    EXPECT_EQ((u * u.inverse()).residue(), 1u);
    const padic v(3, 6, 45);
    const padic w = v.exact_div_p(2);
    EXPECT_EQ(w.precision(), 4);
    EXPECT_EQ(w.residue(), 5u);
    EXPECT_EQ(v.unit_part().residue(), 5u);
    EXPECT_THROW(padic(3, 4, 3).inverse(), std::exception);
}

TEST(Padic, ValuationIsCertifiedOnlyBelowPrecision)
{
    const padic z(5, 3, 125);
    EXPECT_TRUE(z.is_zero());
    EXPECT_THROW((void)z.valuation(), insufficient_precision);
    EXPECT_EQ(z.valuation_min(3), 3);
    EXPECT_THROW((void)z.valuation_min(4), insufficient_precision);
    EXPECT_TRUE(z.valuation_at_least(3));
}

TEST(Padic, WordLimit)
{
    EXPECT_EQ(word_precision_limit(2), 62);
    EXPECT_THROW(padic(2, 63, 1), insufficient_precision);
    EXPECT_NO_THROW(padic(3, word_precision_limit(3), 1));
}

TEST(UnitSquare, Examples)
{
    EXPECT_TRUE(is_unit_square(padic(2, 5, 17)));
    EXPECT_FALSE(is_unit_square(padic(2, 5, 3)));
    EXPECT_TRUE(is_unit_square(padic(7, 3, 2)));
    EXPECT_FALSE(is_unit_square(padic(7, 3, 3)));
    EXPECT_THROW(is_unit_square(padic(2, 2, 1)), insufficient_precision);
    EXPECT_THROW(is_unit_square(padic(3, 3, 3)), std::domain_error);
}

TEST(Integers, Helpers)
{
    EXPECT_EQ(prime_divisors(360), (std::vector<std::int64_t>{2, 3, 5}));
    EXPECT_EQ(totient(36), 12);
    EXPECT_EQ(ipow(3, 4), 81);
    EXPECT_TRUE(is_prime(97));
    EXPECT_FALSE(is_prime(91));
    EXPECT_EQ(invmod(3, 16), 11u);
    EXPECT_EQ(to_string(rational(6, -4)), "-3/2");
    EXPECT_EQ(to_string(rational(0)), "0/1");
}
