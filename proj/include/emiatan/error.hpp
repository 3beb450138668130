#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emiatan {

enum class ErrorKind {
  DivisionByZero,
  NegativeOperand,
  InsufficientScale,
  ZeroArgument,
  EmptyInterval,
  DomainError,
  AmbiguousRounding,
  DigitCapExceeded,
  SelfCheckFailed,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NegativeOperand: return "NegativeOperand";
    case ErrorKind::InsufficientScale: return "InsufficientScale";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::EmptyInterval: return "EmptyInterval";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::AmbiguousRounding: return "AmbiguousRounding";
    case ErrorKind::DigitCapExceeded: return "DigitCapExceeded";
    case ErrorKind::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Every failure raised by the library carries its kind so that front-ends can
// map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace emiatan
