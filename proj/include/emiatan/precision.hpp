#pragma once

#include <cstdint>
#include <string>

#include "emiatan/error.hpp"

namespace emiatan {

// Number of decimal digits of v >= 0 (0 has one digit).
constexpr int decimal_width(std::uint64_t v) {
  int width = 1;
  while (v >= 10) {
    v /= 10;
    ++width;
  }
  return width;
}

// ceil(log10(v)) for v >= 1.
constexpr int ceil_log10(std::uint64_t v) {
  return v <= 1 ? 0 : decimal_width(v - 1);
}

// Requested correct decimal digits plus the guard digits carried on top of
// them. All rounding happens at working_scale() fractional digits.
class Precision {
 public:
  static constexpr int kMinGuard = 10;

  constexpr explicit Precision(int digits, int guard = kMinGuard)
      : digits_(digits), guard_(guard) {
    if (digits < 0) {
      throw Error(ErrorKind::InvalidArgument,
                  "precision digits must be non-negative");
    }
    if (guard < kMinGuard) {
      throw Error(ErrorKind::InvalidArgument,
                  "guard digits must be at least " + std::to_string(kMinGuard));
    }
  }

  // Guard budget for a series of n_max terms over M subintervals:
  // 10 + ceil(log10(n_max*M + 1)) + ceil(log10(p + 1)).
  static constexpr Precision for_series(int digits, std::int64_t n_max,
                                        std::int64_t subintervals) {
    const auto terms = static_cast<std::uint64_t>(n_max * subintervals);
    const int guard = kMinGuard + ceil_log10(terms + 1) +
                      ceil_log10(static_cast<std::uint64_t>(digits) + 1);
    return Precision(digits, guard);
  }

  constexpr int digits() const { return digits_; }
  constexpr int guard() const { return guard_; }
  constexpr int working_scale() const { return digits_ + guard_; }

  constexpr Precision with_extra_guard(int extra) const {
    return Precision(digits_, guard_ + extra);
  }
  constexpr Precision with_digits(int digits) const {
    return Precision(digits, guard_);
  }

  friend constexpr bool operator==(const Precision&, const Precision&) = default;

 private:
  int digits_;
  int guard_;
};

}  // namespace emiatan
