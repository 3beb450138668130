#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "emiatan/big_rational.hpp"
#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/machin.hpp"
#include "emiatan/precision.hpp"
#include "emiatan/series.hpp"

namespace emiatan {

// Throws SelfCheckFailed unless |a - b| < 10^-digits.
inline void check_agreement(const FixedReal& a, const FixedReal& b, int digits) {
  const FixedReal difference = abs(a - b);
  const FixedReal tolerance(mpz_class(1), digits);  // 10^-digits
  if (!(difference < tolerance)) {
    throw Error(ErrorKind::SelfCheckFailed,
                "independent pi evaluations disagree at " +
                    difference.scientific(3) + " (need < 1e-" +
                    std::to_string(digits) + ")");
  }
}

// 4 * sum_j coefficient_j * atan(1/denominator_j), every arctangent by the
// M = 1 expansion with n_max sized for the working scale.
inline FixedReal pi_from_arctangent_terms(
    const std::vector<std::pair<long, long>>& terms, const Precision& prec) {
  FixedReal quarter = FixedReal(0L).round_to(prec.working_scale());
  for (const auto& [coefficient, denominator] : terms) {
    const BigRational argument(1, denominator);
    const int n_max =
        terms_for_scale(1.0 / static_cast<double>(denominator), 1, prec.working_scale());
    quarter += atan_emi(argument, 1, n_max, prec).value.times(coefficient);
  }
  return quarter.times(4);
}

// Working precision for the self-check pair at `digits` correct digits.
inline Precision self_check_precision(int digits) {
  const int n_max = terms_for_scale(0.5, 1, digits + 40);
  return Precision::for_series(digits, n_max, 1).with_extra_guard(2);
}

// pi from two independent Machin-type identities,
//   pi/4 = 4 atan(1/5) - atan(1/239)   and   pi/4 = 2 atan(1/2) - atan(1/7),
// returned at the working scale only when both agree to `digits` digits.
inline FixedReal self_check_pi(int digits) {
  if (digits < 1) throw Error(ErrorKind::InvalidArgument, "self-check needs >= 1 digit");
  const Precision prec = self_check_precision(digits);
  const FixedReal machin = pi_from_arctangent_terms({{4, 5}, {-1, 239}}, prec);
  const FixedReal hermann = pi_from_arctangent_terms({{2, 2}, {-1, 7}}, prec);
  check_agreement(machin, hermann, digits);
  return machin;
}

}  // namespace emiatan
