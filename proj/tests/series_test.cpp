#include "emiatan/series.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "emiatan/pi_reference.hpp"

namespace emiatan {
namespace {

FixedReal tolerance(int digits) { return FixedReal(mpz_class(1), digits); }

TEST(AlphaBetaTest, InitExamples) {
  const Precision prec(20);
  const FixedReal half = FixedReal::parse("0.5");
  {
    const AlphaBetaState s = alpha_beta_init(FixedReal(2L), half, prec);
    EXPECT_EQ(s.alpha(), FixedReal(1L));
    EXPECT_EQ(s.beta(), FixedReal(1L));
    EXPECT_EQ(s.n(), 1);
  }
  {
    // x = 1 reproduces g_1 = 2/x, h_1 = 1 of the single-midpoint form.
    const AlphaBetaState s = alpha_beta_init(FixedReal(1L), GammaArg(1, 1), prec);
    EXPECT_EQ(s.alpha(), FixedReal(2L));
    EXPECT_EQ(s.beta(), FixedReal(1L));
  }
  {
    const AlphaBetaState s = alpha_beta_init(FixedReal(4L), half, prec);
    EXPECT_EQ(s.alpha(), half);
    EXPECT_EQ(s.beta(), FixedReal(1L));
  }
  try {
    alpha_beta_init(FixedReal(0L), half, prec);
    FAIL() << "expected ZeroArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroArgument);
  }
}

TEST(AlphaBetaTest, StepUsesPreviousPair) {
  const Precision prec(20);
  const FixedReal half = FixedReal::parse("0.5");
  // xt = 1: alpha_2 = 1*0 + 2*1 = 2, beta_2 = 1*0 - 2*1 = -2
  const AlphaBetaState unit = alpha_beta_step(alpha_beta_init(FixedReal(2L), half, prec), prec);
  EXPECT_EQ(unit.alpha(), FixedReal(2L));
  EXPECT_EQ(unit.beta(), FixedReal(-2L));
  EXPECT_EQ(unit.n(), 2);
  // xt = 2: alpha_2 = (1/2)(3/4) + 1 = 11/8, beta_2 = 3/4 - 1/2 = 1/4
  const AlphaBetaState two = alpha_beta_step(alpha_beta_init(FixedReal(4L), half, prec), prec);
  EXPECT_EQ(two.alpha(), FixedReal::parse("1.375"));
  EXPECT_EQ(two.beta(), FixedReal::parse("0.25"));
}

TEST(AlphaBetaTest, MatchesComplexClosedForm) {
  // alpha_n + i beta_n = i (1 - i/u)^(2n - 1)
  const Precision prec(30);
  for (const char* text : {"0.3", "1", "2.5", "-0.7", "4"}) {
    const FixedReal u = FixedReal::parse(text);
    AlphaBetaState state = alpha_beta_init(u, FixedReal(1L), prec);
    const std::complex<double> factor(1.0, -1.0 / u.to_double());
    for (int n = 1; n <= 20; ++n) {
      if (n > 1) state.advance(prec);
      const std::complex<double> expected =
          std::complex<double>(0.0, 1.0) * std::pow(factor, 2 * n - 1);
      const double scale = std::abs(expected);
      ASSERT_NEAR(state.alpha().to_double(), expected.real(), 1e-12 * scale) << text << " " << n;
      ASSERT_NEAR(state.beta().to_double(), expected.imag(), 1e-12 * scale) << text << " " << n;
    }
  }
}

TEST(AtanEmiTest, ZeroShortCircuits) {
  const Precision prec(20);
  for (int m : {1, 2, 7}) {
    EXPECT_TRUE(atan_emi(FixedReal(0L), m, 5, prec).value.is_zero());
  }
  EXPECT_TRUE(atan_emi_m1(FixedReal(0L), 5, prec).value.is_zero());
  EXPECT_THROW(atan_emi(FixedReal(1L), 0, 5, prec), Error);
  EXPECT_THROW(atan_emi(FixedReal(1L), 1, 0, prec), Error);
}

TEST(AtanEmiTest, ArctanOneIsQuarterPi) {
  const Precision prec(100);
  const FixedReal quarter_pi = divide(self_check_pi(110), FixedReal(4L), prec);
  const SeriesResult result = atan_emi(FixedReal(1L), 1, 200, prec);
  EXPECT_EQ(result.terms_used, 200);
  EXPECT_LT(abs(result.value - quarter_pi), tolerance(100));
}

TEST(AtanEmiTest, SingleSubintervalIsTheMidpointForm) {
  const Precision prec(40);
  const FixedReal a = atan_emi(FixedReal(1L), 1, 10, prec).value;
  const FixedReal b = atan_emi_m1(FixedReal(1L), 10, prec).value;
  EXPECT_TRUE(identical(a, b));
}

TEST(AtanEmiTest, SingleSubintervalReductionRandomised) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  std::uniform_int_distribution<int> terms(1, 25);
  const Precision prec(50);
  for (int i = 0; i < 100; ++i) {
    const FixedReal x = FixedReal::from_double(dist(rng), 30);
    const int n = terms(rng);
    ASSERT_TRUE(identical(atan_emi(x, 1, n, prec).value, atan_emi_m1(x, n, prec).value))
        << x.digits(30) << " n=" << n;
  }
}

TEST(AtanEmiTest, OddSymmetryIsExact) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  const Precision prec(30);
  for (int i = 0; i < 40; ++i) {
    const FixedReal x = FixedReal::from_double(dist(rng), 25);
    for (int m : {1, 3}) {
      ASSERT_TRUE(identical(atan_emi(-x, m, 9, prec).value, -atan_emi(x, m, 9, prec).value));
    }
  }
}

TEST(AtanEmiTest, PartialSumsMatchIndividualTruncations) {
  const Precision prec(30);
  const FixedReal x = FixedReal::parse("3.7");
  const std::vector<FixedReal> sums = atan_emi_partial_sums(x, 3, 12, prec);
  for (int n = 1; n <= 12; ++n) {
    ASSERT_TRUE(identical(sums[n - 1], atan_emi(x, 3, n, prec).value)) << n;
  }
}

TEST(AtanEmiTest, RationalArgumentAgreesWithFixedArgument) {
  const Precision prec(60);
  const BigRational x = BigRational(1) / BigRational(8);
  const FixedReal fixed_x = FixedReal::parse("0.125");
  EXPECT_LT(abs(atan_emi(x, 2, 30, prec).value - atan_emi(fixed_x, 2, 30, prec).value),
            tolerance(prec.working_scale() - 2));
}

TEST(ComplexOracleTest, Examples) {
  const Precision prec(30);
  EXPECT_NEAR(atan_complex_oracle(1.0, 1, 10),
              atan_emi_m1(FixedReal(1L), 10, prec).value.to_double(), 1e-13);
  EXPECT_DOUBLE_EQ(atan_complex_oracle(-1.0, 2, 10), -atan_complex_oracle(1.0, 2, 10));
  EXPECT_NEAR(atan_complex_oracle(5.0, 3, 10),
              atan_emi(FixedReal(5L), 3, 10, prec).value.to_double(), 1e-12);
}

TEST(ComplexOracleTest, GridEquivalence) {
  const Precision prec(30);
  for (const char* text : {"0.1", "1", "5", "19", "-0.1", "-1", "-5", "-19"}) {
    const FixedReal x = FixedReal::parse(text);
    for (int m = 1; m <= 5; ++m) {
      const std::vector<FixedReal> sums = atan_emi_partial_sums(x, m, 12, prec);
      for (int n = 1; n <= 12; ++n) {
        ASSERT_NEAR(sums[n - 1].to_double(), atan_complex_oracle(x.to_double(), m, n), 1e-12)
            << text << " M=" << m << " n=" << n;
      }
    }
  }
}

TEST(MaclaurinTest, Examples) {
  const Precision prec(20);
  // 1 - 1/3 + 1/5 - 1/7 = 76/105
  EXPECT_LT(abs(atan_maclaurin(FixedReal(1L), 3, prec).value -
                FixedReal::from_rational(BigRational(76) / BigRational(105), 30)),
            tolerance(prec.working_scale() - 1));
  EXPECT_TRUE(atan_maclaurin(FixedReal(0L), 5, prec).value.is_zero());
  const FixedReal half = FixedReal::parse("0.5");
  EXPECT_LT(abs(atan_maclaurin(half, 40, prec).value - reference_atan(half, prec)),
            tolerance(12));
}

TEST(EulerTest, Examples) {
  const Precision prec(20);
  EXPECT_TRUE(atan_euler(FixedReal(0L), 5, prec).value.is_zero());
  EXPECT_EQ(atan_euler(FixedReal(1L), 0, prec).value, FixedReal::parse("0.5"));
  const FixedReal quarter_pi = reference_atan(FixedReal(1L), prec);
  EXPECT_GT(abs(atan_euler(FixedReal(1L), 10, prec).value - quarter_pi),
            abs(atan_emi(FixedReal(1L), 1, 10, prec).value - quarter_pi));
}

// Incremental coefficients against 2^(2n) (n!)^2 / (2n+1)! evaluated directly.
TEST(EulerTest, IncrementalTermsMatchFactorialForm) {
  const Precision prec(40);
  const BigRational x = BigRational(7) / BigRational(10);
  const FixedReal fixed_x = FixedReal::parse("0.7");
  FixedReal previous = atan_euler(fixed_x, 0, prec).value;
  mpz_class n_factorial = 1;
  mpz_class odd_factorial = 1;  // (2n+1)!
  for (int n = 1; n <= 10; ++n) {
    n_factorial *= n;
    odd_factorial *= (2 * n) * (2 * n + 1);
    BigRational power = x;
    for (int i = 0; i < 2 * n; ++i) power *= x;
    BigRational denominator(1);
    for (int i = 0; i <= n; ++i) denominator *= BigRational(1) + x * x;
    const BigRational term = BigRational(mpz_class(mpz_class(1) << (2 * n)) * n_factorial *
                                         n_factorial) /
                             BigRational(odd_factorial) * power / denominator;
    const FixedReal current = atan_euler(fixed_x, n, prec).value;
    ASSERT_LT(abs((current - previous) -
                  FixedReal::from_rational(term, prec.working_scale())),
              tolerance(prec.working_scale() - 3))
        << n;
    previous = current;
  }
}

// Tail of the m = 1 chain: |error(N)| <= 2 r^(N+1/2) / ((2N+1)(1-r)),
// r = q/(1+q), q = (x/2M)^2.
double tail_bound(double x, int subintervals, int n) {
  const double q = std::pow(x / (2.0 * subintervals), 2);
  const double r = q / (1.0 + q);
  return 2.0 * std::pow(r, n + 0.5) / ((2.0 * n + 1.0) * (1.0 - r));
}

TEST(ConvergenceLawTest, ErrorStaysUnderTailBoundAtOne) {
  const Precision prec(40);
  const FixedReal reference = reference_atan(FixedReal(1L), prec);
  const std::vector<FixedReal> sums = atan_emi_partial_sums(FixedReal(1L), 1, 30, prec);
  for (int n = 1; n <= 30; ++n) {
    const FixedReal error = abs(sums[n - 1] - reference);
    ASSERT_LT(error.to_double(), tail_bound(1.0, 1, n)) << n;
  }
  // On average each term adds -log10(0.2) ~ 0.7 digits.
  const double gain = (abs(sums[4] - reference).log10_abs() -
                       abs(sums[29] - reference).log10_abs()) / 25.0;
  EXPECT_NEAR(gain, -std::log10(0.2), 0.1);
}

TEST(ConvergenceLawTest, ErrorDecreasesWithSubintervalsAtTen) {
  const Precision prec(60);
  const FixedReal x(10L);
  const FixedReal reference = reference_atan(x, prec);
  // Independently computed with mpmath at 60 digits from the same double sum.
  const double expected[] = {1.381e-1, 1.458e-2, 2.010e-3, 4.259e-4, 5.598e-5};
  double previous = 1e9;
  for (int m = 1; m <= 5; ++m) {
    const double error = abs(atan_emi(x, m, 10, prec).value - reference).to_double();
    EXPECT_NEAR(error, expected[m - 1], 1e-3 * expected[m - 1]) << m;
    EXPECT_LT(error, previous) << m;
    previous = error;
  }
}

TEST(ConvergenceLawTest, SmallArgumentGainsAboutEightPointSixDigits) {
  const Precision prec(80);
  const FixedReal x = FixedReal::parse("1e-4");
  const FixedReal reference = reference_atan(x, prec);
  const std::vector<FixedReal> sums = atan_emi_partial_sums(x, 1, 5, prec);
  const double law = -std::log10(std::pow(1e-4 / 2.0, 2));  // ~8.6
  for (int n = 1; n < 5; ++n) {
    const double gain = abs(sums[n - 1] - reference).log10_abs() -
                        abs(sums[n] - reference).log10_abs();
    EXPECT_NEAR(gain, law, 1.0) << n;
  }
}

TEST(ConvergenceLawTest, MaclaurinDivergesWhereExpansionConverges) {
  const Precision prec(30);
  const FixedReal two(2L);
  EXPECT_GT(abs(atan_maclaurin(two, 40, prec).value), FixedReal(1000000L));
  const double error = abs(atan_emi(two, 1, 40, prec).value - reference_atan(two, prec)).to_double();
  EXPECT_LT(error, tail_bound(2.0, 1, 40));
  EXPECT_LT(error, 1e-13);
}

TEST(AtanToPrecisionTest, ReachesRequestedDigits) {
  for (const char* text : {"0.001", "0.3", "1", "-7.25", "19.5"}) {
    const FixedReal x = FixedReal::parse(text);
    const double expected = std::atan(x.to_double());
    for (int m : {1, 4}) {
      const Precision prec(45);
      const SeriesResult result = atan_to_precision(x, m, prec);
      EXPECT_NEAR(result.value.to_double(), expected, 1e-15 * std::max(1.0, std::fabs(expected)));
      // Two different subinterval counts must agree to the requested digits.
      EXPECT_LT(abs(result.value - reference_atan(x, prec)), tolerance(45)) << text << " M=" << m;
    }
  }
}

TEST(AtanToPrecisionTest, TermEstimate) {
  // x = 1, M = 1: r = 1/5, 0.699 digits per term.
  const int n = terms_for_scale(1.0, 1, 100);
  EXPECT_GE(n, 143);
  EXPECT_LE(n, 150);
  EXPECT_EQ(terms_for_scale(0.0, 3, 100), 1);
}

}  // namespace
}  // namespace emiatan
