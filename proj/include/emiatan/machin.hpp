#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emiatan/big_rational.hpp"
#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/precision.hpp"
#include "emiatan/series.hpp"

namespace emiatan {

// a_0 = 0, a_{j+1} = sqrt(2 + a_j); holds (a_{k-1}, a_k).
struct NestedRadicalPair {
  int k = 0;
  FixedReal a_prev;
  FixedReal a_k;
};

inline NestedRadicalPair nested_radical(int k, const Precision& prec) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "nested radical needs k >= 1");
  FixedReal previous = FixedReal(0L).round_to(prec.working_scale());
  FixedReal current = previous;
  for (int j = 1; j <= k; ++j) {
    previous = current;
    current = sqrt(FixedReal(2L) + previous, prec);
  }
  return {k, previous, current};
}

enum class RoundingMode { Floor, Ceil };

// Digits lost to the cancellation in 2 - a_{k-1} ~ (pi / 2^k)^2.
inline int nested_radical_cancellation(int k) {
  return static_cast<int>(std::ceil(2.0 * k * std::log10(2.0))) + 2;
}

namespace detail {

// floor or ceil of `ratio`, refusing when the fractional part lies within
// 10 * 10^-guard of an integer.
inline mpz_class round_unambiguous(const FixedReal& ratio, RoundingMode mode, int guard) {
  const mpz_class unit = pow10(ratio.scale());
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), ratio.mantissa().get_mpz_t(), unit.get_mpz_t());
  const FixedReal fraction = ratio - FixedReal(whole, 0);
  const FixedReal margin(10L, guard);
  if (fraction < margin || FixedReal(1L) - fraction < margin) {
    throw Error(ErrorKind::AmbiguousRounding,
                "ratio " + ratio.digits(std::min(ratio.scale(), 30)) +
                    " is within guard noise of an integer; raise the precision");
  }
  if (mode == RoundingMode::Ceil) ++whole;
  return whole;
}

}  // namespace detail

// gamma = floor|ceil(10^m a_k / sqrt(2 - a_{k-1})) 10^-m, so that
// 2^(k-1)/gamma ~ pi/4.
inline BigRational gamma_select(int k, int m, RoundingMode mode, const Precision& prec) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "gamma selection needs k >= 2");
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "gamma grain m must be >= 0");
  const Precision working = Precision(prec.digits() + m, prec.guard())
                                .with_extra_guard(nested_radical_cancellation(k));
  const NestedRadicalPair radicals = nested_radical(k, working);
  const FixedReal root = sqrt(FixedReal(2L) - radicals.a_prev, working);
  const FixedReal ratio =
      divide(radicals.a_k.times(detail::pow10(m)), root, working);
  return BigRational(detail::round_unambiguous(ratio, mode, prec.guard()), detail::pow10(m));
}

inline constexpr std::size_t kDefaultDigitCap = 1'000'000;

// sin and cos of theta = arctan(2 gamma / (gamma^2 - 1)) = 2 arctan(1/gamma).
inline RationalSinCos machin_seed_angle(const BigRational& gamma) {
  const BigRational squared = gamma * gamma;
  const BigRational denominator = squared + BigRational(1);
  return {BigRational(2) * gamma / denominator,
          (squared - BigRational(1)) / denominator};
}

// (1 - sin(2^(k-1) theta)) / cos(2^(k-1) theta) in exact arithmetic, by k - 1
// doublings of the seed angle. Throws DigitCapExceeded once a numerator or
// denominator grows past digit_cap decimal digits.
inline BigRational second_argument_exact(int k, const BigRational& gamma,
                                         std::size_t digit_cap = kDefaultDigitCap) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "second argument needs k >= 2");
  if (gamma <= BigRational(1)) throw Error(ErrorKind::InvalidArgument, "need gamma > 1");
  RationalSinCos angle = machin_seed_angle(gamma);
  auto check_cap = [&](int step) {
    const std::size_t width =
        std::max(angle.sin.digit_count(), angle.cos.digit_count());
    if (width > digit_cap) {
      throw Error(ErrorKind::DigitCapExceeded,
                  "exact second argument for k=" + std::to_string(k) + " reached " +
                      std::to_string(width) + " digits after " + std::to_string(step) +
                      " doublings (cap " + std::to_string(digit_cap) + ")");
    }
  };
  check_cap(0);
  for (int step = 1; step < k; ++step) {
    angle = double_angle_step(angle);
    check_cap(step);
  }
  return (BigRational(1) - angle.sin) / angle.cos;
}

// The same doubling recursion in fixed point. Each doubling can cost about a
// digit, so 2k guard digits are added on top of the caller's precision.
inline FixedReal second_argument_fixed(int k, const BigRational& gamma,
                                       const Precision& prec) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "second argument needs k >= 2");
  if (gamma <= BigRational(1)) throw Error(ErrorKind::InvalidArgument, "need gamma > 1");
  const Precision working = prec.with_extra_guard(2 * k);
  const RationalSinCos seed = machin_seed_angle(gamma);
  FixedReal s = FixedReal::from_rational(seed.sin, working.working_scale());
  FixedReal c = FixedReal::from_rational(seed.cos, working.working_scale());
  for (int step = 1; step < k; ++step) {
    FixedReal next_s = multiply(s, c, working).times(2);
    FixedReal next_c = multiply(c, c, working) - multiply(s, s, working);
    s = std::move(next_s);
    c = std::move(next_c);
  }
  return divide(FixedReal(1L) - s, c, working).round_to(prec.working_scale());
}

// Scale that keeps `significant` digits of a value whose leading digit sits at
// 10^exponent.
inline int scale_for_significant(long exponent, int significant) {
  return static_cast<int>(std::max<long>(significant, significant - 1 - exponent));
}

// pi/4 = 2^(k-1) arctan(1/gamma) + arctan(second_arg).
struct MachinTwoTerm {
  int k = 2;
  BigRational gamma;
  std::optional<BigRational> second_arg;  // exact, when it fits the digit cap
  FixedReal second_arg_fx;                // rounded view used for evaluation
  int digits = 0;                         // significant digits of second_arg_fx

  mpz_class lead_coefficient() const {
    mpz_class result = 1;
    result <<= static_cast<mp_bitcnt_t>(k - 1);
    return result;
  }

  // k=<int> gamma=<num>/<den> second_arg=<num>/<den>|fixed:<decimal> digits=<p>
  std::string to_record() const {
    std::string record = "k=" + std::to_string(k) + " gamma=" + gamma.to_string() +
                         " second_arg=";
    record += second_arg ? second_arg->to_string()
                         : "fixed:" + second_arg_fx.digits(second_arg_fx.scale());
    record += " digits=" + std::to_string(digits);
    return record;
  }

  static MachinTwoTerm from_record(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string field;
    std::optional<int> k;
    std::optional<int> digits;
    std::optional<BigRational> gamma;
    std::string second;
    while (in >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::ParseError, "record field without '=': " + field);
      }
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "k") {
        k = static_cast<int>(detail::parse_integer(value).get_si());
      } else if (key == "gamma") {
        gamma = BigRational::parse(value);
      } else if (key == "second_arg") {
        second = value;
      } else if (key == "digits") {
        digits = static_cast<int>(detail::parse_integer(value).get_si());
      } else {
        throw Error(ErrorKind::ParseError, "unknown record field '" + key + "'");
      }
    }
    if (!k || !gamma || second.empty() || !digits) {
      throw Error(ErrorKind::ParseError, "incomplete formula record");
    }
    MachinTwoTerm formula;
    formula.k = *k;
    formula.gamma = *gamma;
    formula.digits = *digits;
    if (second.rfind("fixed:", 0) == 0) {
      formula.second_arg_fx = FixedReal::parse(second.substr(6));
    } else {
      formula.second_arg = BigRational::parse(second);
      const FixedReal probe = FixedReal::from_rational(*formula.second_arg, 40);
      const long exponent = probe.is_zero() ? -40 : probe.decimal_exponent();
      formula.second_arg_fx = FixedReal::from_rational(
          *formula.second_arg, scale_for_significant(exponent, *digits));
    }
    return formula;
  }
};

enum class SecondArgMode { Auto, Exact, Fixed };

struct ForgeOptions {
  int gamma_grain = 0;  // m in the 10^-m grained gamma
  RoundingMode rounding = RoundingMode::Floor;
  int second_arg_digits = 100;  // significant digits of the rounded view
  SecondArgMode mode = SecondArgMode::Auto;
  std::size_t digit_cap = kDefaultDigitCap;
  int gamma_digits = 60;
};

// Projected width of the exact second argument: the seed's denominator
// doubles in length with every doubling.
inline double projected_exact_digits(int k, const BigRational& gamma) {
  const RationalSinCos seed = machin_seed_angle(gamma);
  const double seed_digits = static_cast<double>(
      std::max(seed.sin.digit_count(), seed.cos.digit_count()));
  return seed_digits * std::pow(2.0, k - 1);
}

inline MachinTwoTerm forge_with_gamma(int k, const BigRational& gamma,
                                      const ForgeOptions& options) {
  MachinTwoTerm formula;
  formula.k = k;
  formula.gamma = gamma;
  formula.digits = options.second_arg_digits;
  const bool try_exact =
      options.mode == SecondArgMode::Exact ||
      (options.mode == SecondArgMode::Auto &&
       projected_exact_digits(k, gamma) <= static_cast<double>(options.digit_cap));
  if (try_exact) {
    formula.second_arg = second_argument_exact(k, gamma, options.digit_cap);
  }
  // Locate the leading digit first, then compute with enough fractional digits.
  const FixedReal probe = formula.second_arg
                              ? FixedReal::from_rational(*formula.second_arg, 40)
                              : second_argument_fixed(k, gamma, Precision(30));
  const long exponent = probe.is_zero() ? -30 : probe.decimal_exponent();
  const int scale = scale_for_significant(exponent, options.second_arg_digits);
  formula.second_arg_fx =
      formula.second_arg
          ? FixedReal::from_rational(*formula.second_arg, scale)
          : second_argument_fixed(k, gamma, Precision(scale)).round_to(scale);
  return formula;
}

inline MachinTwoTerm forge_formula(int k, const ForgeOptions& options = {}) {
  const BigRational gamma = gamma_select(k, options.gamma_grain, options.rounding,
                                         Precision(options.gamma_digits));
  return forge_with_gamma(k, gamma, options);
}

// Guard digits for evaluating the formula: series budget plus the 2^(k+1)
// amplification of both arctangent errors.
inline Precision machin_precision(int digits, int k, int subintervals, int n_max) {
  return Precision::for_series(digits, n_max, subintervals)
      .with_extra_guard(static_cast<int>(std::ceil((k + 1) * std::log10(2.0))) + 1);
}

// Smallest n_max for which both arctangent terms reach the working scale.
inline int machin_terms_for(const MachinTwoTerm& formula, int subintervals,
                            const Precision& prec) {
  const int target = prec.working_scale();
  const int first = terms_for_scale(formula.gamma.reciprocal().to_double(), subintervals,
                                    target);
  const int second =
      terms_for_scale(std::fabs(formula.second_arg_fx.to_double()), subintervals, target);
  return std::max(first, second);
}

// 4 (2^(k-1) atan(1/gamma) + atan(second_arg)) for n_max = 1..n_max.
inline std::vector<FixedReal> machin_partial_sums(const MachinTwoTerm& formula,
                                                  int subintervals, int n_max,
                                                  const Precision& prec) {
  const std::vector<FixedReal> first =
      atan_emi_partial_sums(formula.gamma.reciprocal(), subintervals, n_max, prec);
  const std::vector<FixedReal> second =
      atan_emi_partial_sums(formula.second_arg_fx, subintervals, n_max, prec);
  const mpz_class lead = formula.lead_coefficient();
  std::vector<FixedReal> sums;
  sums.reserve(n_max);
  for (int n = 0; n < n_max; ++n) {
    sums.push_back((first[n].times(lead) + second[n]).times(4));
  }
  return sums;
}

inline FixedReal machin_eval(const MachinTwoTerm& formula, int subintervals, int n_max,
                             const Precision& prec) {
  return machin_partial_sums(formula, subintervals, n_max, prec).back();
}

// floor(-log10 |approx - reference|); the reference scale when they coincide.
inline int correct_digits(const FixedReal& approx, const FixedReal& reference) {
  const FixedReal difference = approx - reference;
  if (difference.is_zero()) return std::max(approx.scale(), reference.scale());
  return static_cast<int>(std::floor(-difference.log10_abs()));
}

// 16 sum_{m=1}^{m_max} sum_{n=1}^{2m-1} (-4)^(n-1) C(2m-1, 2n-1) / ((2m-1) 5^(2m-1)),
// accumulated exactly and rounded once.
inline FixedReal binomial_pi_series(int m_max, const Precision& prec) {
  if (m_max < 1) throw Error(ErrorKind::InvalidArgument, "m_max must be >= 1");
  std::vector<mpz_class> row{1};  // Pascal row 0
  BigRational total;
  mpz_class five_power = 1;
  for (int m = 1; m <= m_max; ++m) {
    const int top = 2 * m - 1;
    // advance the Pascal row to index `top`
    while (static_cast<int>(row.size()) - 1 < top) {
      std::vector<mpz_class> next(row.size() + 1);
      next.front() = 1;
      next.back() = 1;
      for (std::size_t j = 1; j < row.size(); ++j) next[j] = row[j - 1] + row[j];
      row = std::move(next);
    }
    five_power *= (m == 1) ? 5 : 25;
    mpz_class inner = 0;
    mpz_class four_power = 1;  // (-4)^(n-1)
    for (int n = 1; 2 * n - 1 <= top; ++n) {
      inner += four_power * row[2 * n - 1];
      four_power *= -4;
    }
    total += BigRational(inner, five_power * top);
  }
  return FixedReal::from_rational(total * BigRational(16), prec.working_scale());
}

}  // namespace emiatan
