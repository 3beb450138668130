#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "emiatan/big_rational.hpp"
#include "emiatan/error.hpp"
#include "emiatan/precision.hpp"

namespace emiatan {

namespace detail {

// numerator/denominator rounded to the nearest integer, ties to even.
// Symmetric under negation of the numerator.
inline mpz_class round_half_even(const mpz_class& numerator,
                                 const mpz_class& denominator) {
  mpz_class den = denominator;
  mpz_class num = numerator;
  if (den < 0) {
    den = -den;
    num = -num;
  }
  mpz_class quotient, remainder;
  mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(),
              den.get_mpz_t());
  const int side = cmp(mpz_class(2 * remainder), den);
  if (side > 0 || (side == 0 && mpz_odd_p(quotient.get_mpz_t()))) {
    ++quotient;
  }
  return quotient;
}

// floor(sqrt(n)) by integer Newton iteration seeded from a double estimate.
inline mpz_class newton_isqrt(const mpz_class& n) {
  if (n < 2) return n;
  long exponent = 0;
  double top = mpz_get_d_2exp(&exponent, n.get_mpz_t());  // n ~ top * 2^exponent
  if (exponent % 2 != 0) {
    top *= 2.0;
    --exponent;
  }
  // Keep 50 bits of the seed and shift the rest in as an exact power of two.
  const long half = exponent / 2;
  const long shift = half > 50 ? half - 50 : 0;
  mpz_class x(std::ldexp(std::sqrt(top), static_cast<int>(half - shift)));
  x <<= static_cast<mp_bitcnt_t>(shift);
  if (x == 0) x = 1;
  // One step from any positive start lands at or above floor(sqrt(n)); from
  // there the iteration decreases monotonically to it.
  x = (x + n / x) >> 1;
  while (true) {
    mpz_class next = (x + n / x) >> 1;
    if (next >= x) break;
    x = std::move(next);
  }
  return x;
}

}  // namespace detail

// Signed decimal fixed-point number: mantissa * 10^-scale.
class FixedReal {
 public:
  FixedReal() = default;
  FixedReal(mpz_class mantissa, int scale)
      : mantissa_(std::move(mantissa)), scale_(scale) {
    if (scale < 0) {
      throw Error(ErrorKind::InvalidArgument, "negative scale");
    }
  }
  FixedReal(long value) : mantissa_(value) {}  // NOLINT(runtime/explicit)

  // Parses [+-]digits[.digits][e[+-]digits] exactly.
  static FixedReal parse(std::string_view text) {
    std::string body(text);
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string::npos) {
      const mpz_class exp_value = detail::parse_integer(body.substr(e + 1));
      if (::abs(exp_value) > 100000) {
        throw Error(ErrorKind::ParseError, "exponent out of range in '" + body + "'");
      }
      exponent = exp_value.get_si();
      body.erase(e);
    }
    const BigRational exact = BigRational::parse(body);
    std::size_t fraction_digits = 0;
    if (auto dot = body.find('.'); dot != std::string::npos) {
      fraction_digits = body.size() - dot - 1;
    }
    const long scale = std::max(0L, static_cast<long>(fraction_digits) - exponent);
    const BigRational shifted =
        exponent >= 0 ? exact * BigRational(detail::pow10(exponent))
                      : exact / BigRational(detail::pow10(-exponent));
    return from_rational(shifted, static_cast<int>(scale));
  }

  static FixedReal from_rational(const BigRational& value, int scale) {
    return FixedReal(detail::round_half_even(value.numerator() * detail::pow10(scale),
                                             value.denominator()),
                     scale);
  }

  // The binary double converted exactly, then rounded to `scale`.
  static FixedReal from_double(double value, int scale) {
    const mpq_class exact(value);
    return from_rational(BigRational(exact.get_num(), exact.get_den()), scale);
  }

  const mpz_class& mantissa() const { return mantissa_; }
  int scale() const { return scale_; }
  int sign() const { return sgn(mantissa_); }
  bool is_zero() const { return mantissa_ == 0; }

  FixedReal round_to(int scale) const {
    if (scale >= scale_) {
      return FixedReal(mantissa_ * detail::pow10(scale - scale_), scale);
    }
    return FixedReal(detail::round_half_even(mantissa_, detail::pow10(scale_ - scale)),
                     scale);
  }

  BigRational to_rational() const {
    return BigRational(mantissa_, detail::pow10(scale_));
  }

  double to_double() const { return to_rational().to_double(); }

  // log10|value|, -inf for zero.
  double log10_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    long exponent = 0;
    const double top = mpz_get_d_2exp(&exponent, mantissa_.get_mpz_t());
    return std::log10(std::fabs(top)) + static_cast<double>(exponent) * std::log10(2.0) -
           scale_;
  }

  // Exact decimal rendering truncated toward zero to n fractional digits.
  std::string digits(int n) const {
    if (n > scale_) {
      throw Error(ErrorKind::InsufficientScale,
                  "requested " + std::to_string(n) + " digits from scale " +
                      std::to_string(scale_));
    }
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative digit count");
    mpz_class magnitude = ::abs(mantissa_);
    mpz_tdiv_q(magnitude.get_mpz_t(), magnitude.get_mpz_t(),
               detail::pow10(scale_ - n).get_mpz_t());
    std::string text = magnitude.get_str();
    if (text.size() <= static_cast<std::size_t>(n)) {
      text.insert(0, static_cast<std::size_t>(n) + 1 - text.size(), '0');
    }
    if (n > 0) text.insert(text.size() - n, ".");
    return (sign() < 0 ? "-" : "") + text;
  }

  // Power of ten of the leading significant digit; requires a non-zero value.
  long decimal_exponent() const {
    return static_cast<long>(detail::decimal_digits(mantissa_)) - 1 - scale_;
  }

  // The first `count` significant digits, truncated, without sign or point.
  std::string significant_digits(int count) const {
    std::string text = mpz_class(::abs(mantissa_)).get_str();
    if (text.size() < static_cast<std::size_t>(count)) {
      text.append(count - text.size(), '0');
    }
    return text.substr(0, count);
  }

  // "d.ddde[+-]x" with `significant` digits, rounded half-even.
  std::string scientific(int significant) const {
    if (significant < 1) throw Error(ErrorKind::InvalidArgument, "need >= 1 digit");
    mpz_class magnitude = ::abs(mantissa_);
    long exponent = 0;
    if (!is_zero()) {
      const auto width = static_cast<long>(detail::decimal_digits(magnitude));
      exponent = width - 1 - scale_;
      if (width > significant) {
        magnitude = detail::round_half_even(magnitude, detail::pow10(width - significant));
        if (magnitude == detail::pow10(significant)) {
          magnitude /= 10;
          ++exponent;
        }
      } else {
        magnitude *= detail::pow10(significant - width);
      }
    } else {
      magnitude = 0;
    }
    std::string text = magnitude.get_str();
    if (text.size() < static_cast<std::size_t>(significant)) {
      text.insert(0, significant - text.size(), '0');
    }
    if (significant > 1) text.insert(1, ".");
    return (sign() < 0 ? "-" : "") + text + "e" + (exponent < 0 ? "-" : "+") +
           std::to_string(exponent < 0 ? -exponent : exponent);
  }

  FixedReal abs() const { return FixedReal(::abs(mantissa_), scale_); }
  FixedReal operator-() const { return FixedReal(-mantissa_, scale_); }

  // Exact product with an integer.
  FixedReal times(const mpz_class& factor) const {
    return FixedReal(mantissa_ * factor, scale_);
  }

  friend FixedReal operator+(const FixedReal& a, const FixedReal& b) {
    if (a.scale_ == b.scale_) return FixedReal(a.mantissa_ + b.mantissa_, a.scale_);
    if (a.scale_ > b.scale_) {
      return FixedReal(a.mantissa_ + b.mantissa_ * detail::pow10(a.scale_ - b.scale_),
                       a.scale_);
    }
    return FixedReal(a.mantissa_ * detail::pow10(b.scale_ - a.scale_) + b.mantissa_,
                     b.scale_);
  }
  friend FixedReal operator-(const FixedReal& a, const FixedReal& b) { return a + (-b); }
  FixedReal& operator+=(const FixedReal& o) { return *this = *this + o; }
  FixedReal& operator-=(const FixedReal& o) { return *this = *this - o; }

  // Value comparison: 1.50 == 1.5.
  friend std::strong_ordering operator<=>(const FixedReal& a, const FixedReal& b) {
    int c = 0;
    if (a.scale_ == b.scale_) {
      c = cmp(a.mantissa_, b.mantissa_);
    } else if (a.scale_ > b.scale_) {
      c = cmp(a.mantissa_, mpz_class(b.mantissa_ * detail::pow10(a.scale_ - b.scale_)));
    } else {
      c = cmp(mpz_class(a.mantissa_ * detail::pow10(b.scale_ - a.scale_)), b.mantissa_);
    }
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
  }
  friend bool operator==(const FixedReal& a, const FixedReal& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  // Same value and same scale.
  friend bool identical(const FixedReal& a, const FixedReal& b) {
    return a.scale_ == b.scale_ && a.mantissa_ == b.mantissa_;
  }

 private:
  mpz_class mantissa_;
  int scale_ = 0;
};

inline FixedReal abs(const FixedReal& v) { return v.abs(); }

// Product rounded half-even to the working scale.
inline FixedReal multiply(const FixedReal& a, const FixedReal& b, const Precision& prec) {
  const int scale = prec.working_scale();
  return FixedReal(a.mantissa() * b.mantissa(), a.scale() + b.scale()).round_to(scale);
}

// Correctly rounded quotient at the working scale.
inline FixedReal divide(const FixedReal& a, const FixedReal& b, const Precision& prec) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "fixed-point division by 0");
  const int scale = prec.working_scale();
  const long shift = static_cast<long>(scale) - a.scale() + b.scale();
  if (shift >= 0) {
    return FixedReal(
        detail::round_half_even(a.mantissa() * detail::pow10(shift), b.mantissa()), scale);
  }
  return FixedReal(
      detail::round_half_even(a.mantissa(), b.mantissa() * detail::pow10(-shift)), scale);
}

inline FixedReal divide(const FixedReal& a, const mpz_class& b, const Precision& prec) {
  return divide(a, FixedReal(b, 0), prec);
}

// Square root rounded half-even at the working scale.
inline FixedReal sqrt(const FixedReal& a, const Precision& prec) {
  if (a.sign() < 0) throw Error(ErrorKind::NegativeOperand, "sqrt of negative value");
  const int scale = prec.working_scale();
  // radicand = a * 10^(2*scale), as an integer
  const mpz_class radicand =
      a.scale() <= 2 * scale
          ? mpz_class(a.mantissa() * detail::pow10(2 * scale - a.scale()))
          : detail::round_half_even(a.mantissa(), detail::pow10(a.scale() - 2 * scale));
  mpz_class root = detail::newton_isqrt(radicand);
  // sqrt(n) > r + 1/2  <=>  n > r^2 + r (integers, no ties possible)
  if (radicand > root * root + root) ++root;
  return FixedReal(std::move(root), scale);
}

inline std::ostream& operator<<(std::ostream& out, const FixedReal& value) {
  return out << value.digits(value.scale());
}

}  // namespace emiatan
