#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "emiatan/error.hpp"

namespace emiatan {

namespace detail {

inline mpz_class parse_integer(std::string_view text) {
  std::string digits(text);
  std::size_t start = (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) ? 1 : 0;
  if (start == digits.size()) {
    throw Error(ErrorKind::ParseError, "empty integer '" + digits + "'");
  }
  for (std::size_t i = start; i < digits.size(); ++i) {
    if (digits[i] < '0' || digits[i] > '9') {
      throw Error(ErrorKind::ParseError, "malformed integer '" + digits + "'");
    }
  }
  if (digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

inline mpz_class pow10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

// Decimal digit count of |v|, exact (mpz_sizeinbase may overshoot by one).
inline std::size_t decimal_digits(const mpz_class& v) {
  if (v == 0) return 1;
  std::size_t estimate = mpz_sizeinbase(v.get_mpz_t(), 10);
  mpz_class magnitude = abs(v);
  if (magnitude < pow10(estimate - 1)) --estimate;
  return estimate;
}

}  // namespace detail

// Exact ratio of arbitrary-size integers, always held in lowest terms with a
// positive denominator.
class BigRational {
 public:
  BigRational() = default;
  BigRational(long value) : value_(value) {}  // NOLINT(runtime/explicit)
  BigRational(const mpz_class& value) : value_(value) {}  // NOLINT
  BigRational(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator == 0) {
      throw Error(ErrorKind::DivisionByZero, "zero denominator");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  // Accepts "n", "n/d" or a finite decimal "i.fff".
  static BigRational parse(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      return BigRational(detail::parse_integer(text.substr(0, slash)),
                         detail::parse_integer(text.substr(slash + 1)));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string digits(text.substr(0, dot));
      std::string_view fraction = text.substr(dot + 1);
      if (fraction.empty() || fraction[0] == '-' || fraction[0] == '+') {
        throw Error(ErrorKind::ParseError,
                    "malformed decimal '" + std::string(text) + "'");
      }
      digits += fraction;
      if (digits.empty() || digits == "-" || digits == "+") digits += '0';
      return BigRational(detail::parse_integer(digits),
                         detail::pow10(fraction.size()));
    }
    return BigRational(detail::parse_integer(text));
  }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& get() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  // Larger of the numerator and denominator decimal widths.
  std::size_t digit_count() const {
    return std::max(detail::decimal_digits(value_.get_num()),
                    detail::decimal_digits(value_.get_den()));
  }

  double to_double() const { return value_.get_d(); }

  // Always "num/den", including integers ("5/1").
  std::string to_string() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  BigRational reciprocal() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "reciprocal of 0");
    return from_canonical(1 / value_);
  }

  BigRational operator-() const { return from_canonical(-value_); }

  friend BigRational operator+(const BigRational& a, const BigRational& b) {
    return from_canonical(a.value_ + b.value_);
  }
  friend BigRational operator-(const BigRational& a, const BigRational& b) {
    return from_canonical(a.value_ - b.value_);
  }
  friend BigRational operator*(const BigRational& a, const BigRational& b) {
    return from_canonical(a.value_ * b.value_);
  }
  friend BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational division by 0");
    return from_canonical(a.value_ / b.value_);
  }
  BigRational& operator+=(const BigRational& o) { return *this = *this + o; }
  BigRational& operator-=(const BigRational& o) { return *this = *this - o; }
  BigRational& operator*=(const BigRational& o) { return *this = *this * o; }
  BigRational& operator/=(const BigRational& o) { return *this = *this / o; }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const BigRational& a,
                                          const BigRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
  }

 private:
  static BigRational from_canonical(mpq_class v) {
    BigRational r;
    r.value_ = std::move(v);
    return r;
  }

  mpq_class value_;
};

inline BigRational abs(const BigRational& r) { return r.sign() < 0 ? -r : r; }

// Exact sine/cosine pair of a rational-angle point on the unit circle.
struct RationalSinCos {
  BigRational sin;
  BigRational cos;

  friend bool operator==(const RationalSinCos&, const RationalSinCos&) = default;
};

// (s, c) -> (2sc, c^2 - s^2). Requires s^2 + c^2 = 1; the result stays on the
// unit circle exactly.
inline RationalSinCos double_angle_step(const RationalSinCos& angle) {
  assert(angle.sin * angle.sin + angle.cos * angle.cos == BigRational(1));
  return {BigRational(2) * angle.sin * angle.cos,
          angle.cos * angle.cos - angle.sin * angle.sin};
}

inline std::ostream& operator<<(std::ostream& out, const BigRational& value) {
  return out << value.to_string();
}

}  // namespace emiatan
