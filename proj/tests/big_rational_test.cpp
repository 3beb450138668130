#include "emiatan/big_rational.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace emiatan {
namespace {

bool in_lowest_terms(const BigRational& r) {
  mpz_class g;
  const mpz_class num = r.numerator();
  const mpz_class den = r.denominator();
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return g == 1 && den > 0;
}

TEST(BigRationalTest, NormalizesOnConstruction) {
  const BigRational r(mpz_class(6), mpz_class(-4));
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(r.to_string(), "-3/2");
  EXPECT_EQ(BigRational(5).to_string(), "5/1");
  EXPECT_THROW(BigRational(mpz_class(1), mpz_class(0)), Error);
}

TEST(BigRationalTest, Parse) {
  EXPECT_EQ(BigRational::parse("85445659/1"), BigRational(85445659));
  EXPECT_EQ(BigRational::parse("-2/14"), BigRational(-1) / BigRational(7));
  EXPECT_EQ(BigRational::parse("0.125"), BigRational(1) / BigRational(8));
  EXPECT_EQ(BigRational::parse("-.5"), BigRational(-1) / BigRational(2));
  EXPECT_THROW(BigRational::parse("1/x"), Error);
  EXPECT_THROW(BigRational::parse("1."), Error);
}

TEST(BigRationalTest, OperationsStayInLowestTerms) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    mpz_class d1 = testing::random_integer(rng, 30);
    mpz_class d2 = testing::random_integer(rng, 30);
    if (d1 == 0) d1 = 3;
    if (d2 == 0) d2 = 7;
    const BigRational a(testing::random_integer(rng, 30), d1);
    const BigRational b(testing::random_integer(rng, 30), d2);
    ASSERT_TRUE(in_lowest_terms(a + b));
    ASSERT_TRUE(in_lowest_terms(a - b));
    ASSERT_TRUE(in_lowest_terms(a * b));
    if (!b.is_zero()) {
      ASSERT_TRUE(in_lowest_terms(a / b));
      ASSERT_EQ((a / b) * b, a);
    }
  }
}

TEST(BigRationalTest, DigitCount) {
  EXPECT_EQ(BigRational(mpz_class(1), mpz_class(1000)).digit_count(), 4u);
  EXPECT_EQ(BigRational(mpz_class(-99999), mpz_class(7)).digit_count(), 5u);
  EXPECT_EQ(BigRational(0).digit_count(), 1u);
}

TEST(DoubleAngleTest, Examples) {
  EXPECT_EQ(double_angle_step({BigRational(0), BigRational(1)}),
            (RationalSinCos{BigRational(0), BigRational(1)}));
  EXPECT_EQ(double_angle_step({BigRational(1), BigRational(0)}),
            (RationalSinCos{BigRational(0), BigRational(-1)}));
  // 3-4-5 triangle: sin 2t = 24/25, cos 2t = 7/25
  const RationalSinCos doubled =
      double_angle_step({BigRational(3) / BigRational(5), BigRational(4) / BigRational(5)});
  EXPECT_EQ(doubled.sin, BigRational(24) / BigRational(25));
  EXPECT_EQ(doubled.cos, BigRational(7) / BigRational(25));
  EXPECT_EQ(doubled.sin * doubled.sin + doubled.cos * doubled.cos, BigRational(1));
}

TEST(DoubleAngleTest, StaysOnUnitCircleOverChainedDoublings) {
  // Quarter-turn points cycle without growth, so 30 steps are cheap.
  RationalSinCos quarter{BigRational(1), BigRational(0)};
  for (int i = 0; i < 30; ++i) {
    quarter = double_angle_step(quarter);
    ASSERT_EQ(quarter.sin * quarter.sin + quarter.cos * quarter.cos, BigRational(1));
  }
  EXPECT_EQ(quarter, (RationalSinCos{BigRational(0), BigRational(1)}));

  // A generic Pythagorean seed doubles its digit count per step; 16 steps
  // reach ~96k-digit denominators.
  RationalSinCos angle{BigRational(20) / BigRational(29), BigRational(21) / BigRational(29)};
  for (int i = 0; i < 16; ++i) {
    angle = double_angle_step(angle);
    ASSERT_EQ(angle.sin * angle.sin + angle.cos * angle.cos, BigRational(1)) << i;
    ASSERT_TRUE(in_lowest_terms(angle.sin));
    ASSERT_TRUE(in_lowest_terms(angle.cos));
  }
}

}  // namespace
}  // namespace emiatan
