#pragma once

#include <gmpxx.h>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emiatan/big_rational.hpp"
#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/precision.hpp"
#include "emiatan/series.hpp"

namespace emiatan {

// Arithmetic policies for the quadrature engine. Each exposes the same small
// field interface so one template serves exact, fixed-point and double runs.

struct ExactField {
  using value_type = BigRational;
  value_type from_ratio(const mpz_class& num, const mpz_class& den) const {
    return BigRational(num, den);
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type div(const value_type& a, const value_type& b) const { return a / b; }
  bool less(const value_type& a, const value_type& b) const { return a < b; }
};

struct FixedField {
  using value_type = FixedReal;
  Precision prec;
  value_type from_ratio(const mpz_class& num, const mpz_class& den) const {
    return FixedReal::from_rational(BigRational(num, den), prec.working_scale());
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const {
    return multiply(a, b, prec);
  }
  value_type div(const value_type& a, const value_type& b) const {
    return divide(a, b, prec);
  }
  bool less(const value_type& a, const value_type& b) const { return a < b; }
};

struct DoubleField {
  using value_type = double;
  value_type from_ratio(const mpz_class& num, const mpz_class& den) const {
    return mpq_class(num, den).get_d();
  }
  value_type add(value_type a, value_type b) const { return a + b; }
  value_type sub(value_type a, value_type b) const { return a - b; }
  value_type mul(value_type a, value_type b) const { return a * b; }
  value_type div(value_type a, value_type b) const {
    if (b == 0.0) throw Error(ErrorKind::DivisionByZero, "double division by 0");
    return a / b;
  }
  bool less(value_type a, value_type b) const { return a < b; }
};

// d^order f / dt^order at t, with order even. An empty result signals that the
// integrand cannot be evaluated there.
template <class Field>
using DerivativeProvider = std::function<std::optional<typename Field::value_type>(
    const typename Field::value_type& t, int order)>;

template <class Field>
struct QuadratureSpec {
  int subintervals = 1;  // M
  int order = 0;         // N, last index of the derivative sum
  typename Field::value_type a;
  typename Field::value_type b;
};

// (b - a) t + a
template <class Field>
typename Field::value_type interval_transform(const Field& field,
                                              const typename Field::value_type& a,
                                              const typename Field::value_type& b,
                                              const typename Field::value_type& t) {
  if (!field.less(a, b)) {
    throw Error(ErrorKind::EmptyInterval, "interval requires a < b");
  }
  return field.add(field.mul(field.sub(b, a), t), a);
}

// Midpoint rule with even-derivative corrections on (a, b):
//   (b-a) 2 sum_{m=1..M} sum_{n=0..N} (b-a)^(2n) f^(2n)(node_m)
//                                     / ((2M)^(2n+1) (2n+1)!),
// node_m = a + (b-a)(m - 1/2)/M. Derivatives are requested in the original
// variable; the chain-rule factor (b-a)^(2n) is applied here. The n-sum runs
// innermost, the m-sum in ascending order.
template <class Field>
typename Field::value_type emi_integrate(const Field& field,
                                         const DerivativeProvider<Field>& f,
                                         const QuadratureSpec<Field>& spec) {
  using Value = typename Field::value_type;
  if (spec.subintervals < 1 || spec.order < 0) {
    throw Error(ErrorKind::InvalidArgument, "need M >= 1 and N >= 0");
  }
  if (!field.less(spec.a, spec.b)) {
    throw Error(ErrorKind::EmptyInterval, "interval requires a < b");
  }
  const Value width = field.sub(spec.b, spec.a);
  const Value width_squared = field.mul(width, width);
  const mpz_class two_m = 2L * spec.subintervals;

  // term n: f^(2n)(node) (b-a)^(2n+1) / ((2M)^(2n+1) (2n+1)!), divided last so
  // that large derivatives do not amplify a pre-rounded weight.
  std::vector<Value> width_powers;
  std::vector<Value> denominators;
  width_powers.reserve(spec.order + 1);
  denominators.reserve(spec.order + 1);
  {
    Value width_power = width;
    mpz_class denominator = two_m;
    for (int n = 0; n <= spec.order; ++n) {
      if (n > 0) {
        width_power = field.mul(width_power, width_squared);
        denominator *= two_m * two_m * (2L * n) * (2L * n + 1);
      }
      width_powers.push_back(width_power);
      denominators.push_back(field.from_ratio(denominator, 1));
    }
  }

  Value total = field.from_ratio(0, 1);
  for (int m = 1; m <= spec.subintervals; ++m) {
    const Value node = interval_transform(
        field, spec.a, spec.b, field.from_ratio(2L * m - 1, two_m));
    Value inner = field.from_ratio(0, 1);
    for (int n = 0; n <= spec.order; ++n) {
      std::optional<Value> derivative = f(node, 2 * n);
      if (!derivative) {
        throw Error(ErrorKind::DomainError,
                    "integrand derivative of order " + std::to_string(2 * n) +
                        " unavailable at node " + std::to_string(m));
      }
      inner = field.add(inner, field.div(field.mul(*derivative, width_powers[n]), denominators[n]));
    }
    total = field.add(total, inner);
  }
  return field.add(total, total);
}

// ---------------------------------------------------------------------------
// Built-in integrands.

// Polynomial with coefficients c_0 + c_1 t + ... + c_d t^d.
template <class Field>
DerivativeProvider<Field> polynomial_provider(const Field& field,
                                              std::vector<typename Field::value_type> coeffs) {
  return [field, coeffs = std::move(coeffs)](const typename Field::value_type& t,
                                             int order) {
    using Value = typename Field::value_type;
    Value result = field.from_ratio(0, 1);
    const int degree = static_cast<int>(coeffs.size()) - 1;
    // Horner over the differentiated coefficients c_j j!/(j-order)!.
    for (int j = degree; j >= order; --j) {
      mpz_class falling = 1;
      for (int i = 0; i < order; ++i) falling *= (j - i);
      result = field.add(field.mul(result, t),
                         field.mul(coeffs[j], field.from_ratio(falling, 1)));
    }
    return std::optional<Value>(result);
  };
}

// Exact integral of the polynomial over (a, b).
inline BigRational polynomial_integral(const std::vector<BigRational>& coeffs,
                                       const BigRational& a, const BigRational& b) {
  BigRational total;
  BigRational a_power = a;
  BigRational b_power = b;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (j > 0) {
      a_power *= a;
      b_power *= b;
    }
    total += coeffs[j] * (b_power - a_power) / BigRational(static_cast<long>(j + 1));
  }
  return total;
}

// The 2j-th t-derivative of x/(1 + x^2 t^2). With u = xt and the alpha/beta
// chain at u,
//   d^(2j) / dt^(2j) = (2j)! t^-(2j+1) alpha_{j+1} / (alpha_{j+1}^2 + beta_{j+1}^2),
// which stays in real arithmetic. At t = 0 the Taylor coefficients give
// (-1)^j (2j)! x^(2j+1).
inline FixedReal atan_integrand_derivative(const FixedReal& x, const FixedReal& t,
                                           int order, const Precision& prec) {
  if (order < 0 || order % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "only even derivative orders are defined");
  }
  const int half = order / 2;
  mpz_class factorial = 1;
  for (int i = 2; i <= order; ++i) factorial *= i;
  if (x.is_zero()) return FixedReal(0L).round_to(prec.working_scale());
  if (t.is_zero()) {
    FixedReal power = x.round_to(prec.working_scale());
    const FixedReal x_squared = multiply(x, x, prec);
    for (int i = 0; i < half; ++i) power = multiply(power, x_squared, prec);
    return power.times(half % 2 == 0 ? factorial : mpz_class(-factorial));
  }
  // Powers of 1/t rather than t: a small t^(2j+1) would carry a large
  // relative error into the quotient.
  AlphaBetaState state = alpha_beta_init(x, t, prec);
  FixedReal inv_power = divide(FixedReal(1L), t, prec);
  const FixedReal inv_squared = multiply(inv_power, inv_power, prec);
  for (int i = 0; i < half; ++i) {
    state.advance(prec);
    inv_power = multiply(inv_power, inv_squared, prec);
  }
  const FixedReal ratio = state.weighted_ratio(1, prec);
  return multiply(ratio.times(factorial), inv_power, prec);
}

// Provider for x/(1 + x^2 t^2). Consecutive requests at the same node reuse
// the alpha/beta chain.
inline DerivativeProvider<FixedField> atan_kernel_provider(const FixedReal& x,
                                                           const Precision& prec) {
  struct Chain {
    FixedReal node;
    std::optional<AlphaBetaState> state;
    FixedReal inv_power;
    FixedReal inv_squared;
    mpz_class factorial = 1;
    int order = 0;
  };
  auto chain = std::make_shared<Chain>();
  return [x, prec, chain](const FixedReal& t, int order) -> std::optional<FixedReal> {
    if (x.is_zero() || t.is_zero()) return atan_integrand_derivative(x, t, order, prec);
    if (!chain->state || !identical(chain->node, t) || order < chain->order) {
      chain->node = t;
      chain->state = alpha_beta_init(x, t, prec);
      chain->inv_power = divide(FixedReal(1L), t, prec);
      chain->inv_squared = multiply(chain->inv_power, chain->inv_power, prec);
      chain->factorial = 1;
      chain->order = 0;
    }
    while (chain->order < order) {
      chain->state->advance(prec);
      chain->inv_power = multiply(chain->inv_power, chain->inv_squared, prec);
      chain->factorial *= (chain->order + 1) * (chain->order + 2);
      chain->order += 2;
    }
    const FixedReal ratio = chain->state->weighted_ratio(1, prec);
    return multiply(ratio.times(chain->factorial), chain->inv_power, prec);
  };
}

// Central finite-difference derivatives of a double function, for tests:
//   f^(k)(t) ~ h^-k sum_j (-1)^j C(k, j) f(t + (k/2 - j) h).
inline DerivativeProvider<DoubleField> finite_difference_provider(
    std::function<double(double)> f, double step) {
  return [f = std::move(f), step](const double& t, int order) -> std::optional<double> {
    double sum = 0.0;
    double binomial = 1.0;
    for (int j = 0; j <= order; ++j) {
      const double value = f(t + (order / 2.0 - j) * step);
      if (!std::isfinite(value)) return std::nullopt;
      sum += (j % 2 == 0 ? 1.0 : -1.0) * binomial * value;
      binomial = binomial * (order - j) / (j + 1);
    }
    return sum / std::pow(step, order);
  };
}

}  // namespace emiatan
