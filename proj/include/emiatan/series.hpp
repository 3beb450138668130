#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string_view>
#include <vector>

#include "emiatan/big_rational.hpp"
#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/precision.hpp"

namespace emiatan {

enum class SeriesId { Maclaurin, Euler, EmiM1, EmiGeneral, ComplexOracle };

constexpr std::string_view to_string(SeriesId id) {
  switch (id) {
    case SeriesId::Maclaurin: return "maclaurin";
    case SeriesId::Euler: return "euler";
    case SeriesId::EmiM1: return "emi_m1";
    case SeriesId::EmiGeneral: return "emi";
    case SeriesId::ComplexOracle: return "complex_oracle";
  }
  return "unknown";
}

struct SeriesResult {
  FixedReal value;
  int terms_used = 0;
  SeriesId series_id = SeriesId::EmiGeneral;
};

// Midpoint of the m-th of M equal subintervals of (0, 1): (2m - 1) / (2M).
class GammaArg {
 public:
  GammaArg(int m, int subintervals) : m_(m), subintervals_(subintervals) {
    if (subintervals < 1 || m < 1 || m > subintervals) {
      throw Error(ErrorKind::InvalidArgument, "gamma index out of range");
    }
  }

  int m() const { return m_; }
  int subintervals() const { return subintervals_; }
  long odd_index() const { return 2L * m_ - 1; }
  BigRational exact() const { return BigRational(odd_index(), 2L * subintervals_); }
  FixedReal value(const Precision& prec) const {
    return FixedReal::from_rational(exact(), prec.working_scale());
  }

 private:
  int m_;
  int subintervals_;
};

// The pair (alpha_n, beta_n) at a fixed product xt. With u = xt,
//   alpha_n + i beta_n = i (1 - i/u)^(2n - 1),
// so every step multiplies by (1 - i/u)^2 = (1 - 1/u^2) - 2i/u.
class AlphaBetaState {
 public:
  // Starts the chain at n = 1 from a precomputed 1/(xt).
  AlphaBetaState(FixedReal xt, FixedReal inv_xt, const Precision& prec)
      : alpha_(inv_xt),
        beta_(1L),
        n_(1),
        xt_(std::move(xt)),
        inv_xt_(std::move(inv_xt)),
        damping_(FixedReal(1L) - multiply(inv_xt_, inv_xt_, prec)),
        cross_(inv_xt_.times(2)) {}

  const FixedReal& alpha() const { return alpha_; }
  const FixedReal& beta() const { return beta_; }
  int n() const { return n_; }
  const FixedReal& xt() const { return xt_; }
  const FixedReal& inv_xt() const { return inv_xt_; }

  // Both components are updated from the previous pair.
  void advance(const Precision& prec) {
    FixedReal next_alpha =
        multiply(alpha_, damping_, prec) + multiply(beta_, cross_, prec);
    FixedReal next_beta =
        multiply(beta_, damping_, prec) - multiply(alpha_, cross_, prec);
    alpha_ = std::move(next_alpha);
    beta_ = std::move(next_beta);
    ++n_;
  }

  // alpha / (D (alpha^2 + beta^2)) for an integer D, rounded once.
  FixedReal weighted_ratio(const mpz_class& denominator, const Precision& prec) const {
    const FixedReal norm = multiply(alpha_, alpha_, prec) + multiply(beta_, beta_, prec);
    return divide(alpha_, norm.times(denominator), prec);
  }

 private:
  FixedReal alpha_;
  FixedReal beta_;
  int n_;
  FixedReal xt_;
  FixedReal inv_xt_;
  FixedReal damping_;  // 1 - 1/(xt)^2
  FixedReal cross_;    // 2/(xt)
};

inline AlphaBetaState alpha_beta_init(const FixedReal& x, const FixedReal& t,
                                      const Precision& prec) {
  FixedReal xt = multiply(x, t, prec);
  if (xt.is_zero()) {
    throw Error(ErrorKind::ZeroArgument, "alpha/beta iteration needs x*t != 0");
  }
  FixedReal inv = divide(FixedReal(1L), xt, prec);
  return AlphaBetaState(std::move(xt), std::move(inv), prec);
}

// Exact-rational route for t = gamma_{m,M}: 1/(xt) = 2M / ((2m - 1) x).
inline AlphaBetaState alpha_beta_init(const FixedReal& x, const GammaArg& t,
                                      const Precision& prec) {
  if (x.is_zero()) {
    throw Error(ErrorKind::ZeroArgument, "alpha/beta iteration needs x*t != 0");
  }
  FixedReal xt = divide(x.times(t.odd_index()), FixedReal(2L * t.subintervals()), prec);
  FixedReal inv = divide(FixedReal(2L * t.subintervals()), x.times(t.odd_index()), prec);
  return AlphaBetaState(std::move(xt), std::move(inv), prec);
}

inline AlphaBetaState alpha_beta_init(const BigRational& x, const GammaArg& t,
                                      const Precision& prec) {
  if (x.is_zero()) {
    throw Error(ErrorKind::ZeroArgument, "alpha/beta iteration needs x*t != 0");
  }
  const BigRational xt = x * t.exact();
  return AlphaBetaState(FixedReal::from_rational(xt, prec.working_scale()),
                        FixedReal::from_rational(xt.reciprocal(), prec.working_scale()),
                        prec);
}

inline AlphaBetaState alpha_beta_step(AlphaBetaState state, const Precision& prec) {
  state.advance(prec);
  return state;
}

namespace detail {

// Partial sums S_1..S_{n_max} of the generalized expansion
//   2 sum_m sum_{n<=N} alpha_n / ((2n-1)(2m-1)^(2n-1)(alpha_n^2 + beta_n^2)).
// Additions are exact, so the order of accumulation does not affect the bits.
template <class Argument>
std::vector<FixedReal> emi_partial_sums(const Argument& x, int subintervals, int n_max,
                                        const Precision& prec) {
  if (n_max < 1 || subintervals < 1) {
    throw Error(ErrorKind::InvalidArgument, "n_max and M must be >= 1");
  }
  const FixedReal zero = FixedReal(0L).round_to(prec.working_scale());
  std::vector<FixedReal> per_order(n_max, zero);
  if (x.sign() != 0) {
    for (int m = 1; m <= subintervals; ++m) {
      const GammaArg gamma(m, subintervals);
      AlphaBetaState state = alpha_beta_init(x, gamma, prec);
      const mpz_class odd_squared = gamma.odd_index() * gamma.odd_index();
      mpz_class odd_power = gamma.odd_index();  // (2m-1)^(2n-1)
      for (int n = 1; n <= n_max; ++n) {
        if (n > 1) {
          state.advance(prec);
          odd_power *= odd_squared;
        }
        per_order[n - 1] += state.weighted_ratio(odd_power * (2L * n - 1), prec);
      }
    }
  }
  std::vector<FixedReal> sums;
  sums.reserve(n_max);
  FixedReal running = zero;
  for (const FixedReal& contribution : per_order) {
    running += contribution;
    sums.push_back(running.times(2));
  }
  return sums;
}

}  // namespace detail

// Generalized arctangent expansion over M subintervals truncated at n_max.
inline SeriesResult atan_emi(const FixedReal& x, int subintervals, int n_max,
                             const Precision& prec) {
  return {detail::emi_partial_sums(x, subintervals, n_max, prec).back(), n_max,
          subintervals == 1 ? SeriesId::EmiM1 : SeriesId::EmiGeneral};
}

// Same sum for an exact rational argument; 1/(x gamma) is rounded only once.
inline SeriesResult atan_emi(const BigRational& x, int subintervals, int n_max,
                             const Precision& prec) {
  return {detail::emi_partial_sums(x, subintervals, n_max, prec).back(), n_max,
          subintervals == 1 ? SeriesId::EmiM1 : SeriesId::EmiGeneral};
}

inline std::vector<FixedReal> atan_emi_partial_sums(const FixedReal& x, int subintervals,
                                                    int n_max, const Precision& prec) {
  return detail::emi_partial_sums(x, subintervals, n_max, prec);
}

inline std::vector<FixedReal> atan_emi_partial_sums(const BigRational& x,
                                                    int subintervals, int n_max,
                                                    const Precision& prec) {
  return detail::emi_partial_sums(x, subintervals, n_max, prec);
}

// Single-midpoint form with the g/h iteration:
//   g_1 = 2/x, h_1 = 1, g_n = g(1 - 4/x^2) + 4h/x, h_n = h(1 - 4/x^2) - 4g/x.
inline SeriesResult atan_emi_m1(const FixedReal& x, int n_max, const Precision& prec) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  FixedReal sum = FixedReal(0L).round_to(prec.working_scale());
  if (x.is_zero()) return {sum, n_max, SeriesId::EmiM1};
  const FixedReal g1 = divide(FixedReal(2L), x, prec);
  const FixedReal damping = FixedReal(1L) - multiply(g1, g1, prec);
  const FixedReal cross = g1.times(2);
  FixedReal g = g1;
  FixedReal h(1L);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      FixedReal next_g = multiply(g, damping, prec) + multiply(h, cross, prec);
      FixedReal next_h = multiply(h, damping, prec) - multiply(g, cross, prec);
      g = std::move(next_g);
      h = std::move(next_h);
    }
    const FixedReal norm = multiply(g, g, prec) + multiply(h, h, prec);
    sum += divide(g, norm.times(2L * n - 1), prec);
  }
  return {sum.times(2), n_max, SeriesId::EmiM1};
}

// sum_{n=0}^{n_max} (-1)^n x^(2n+1) / (2n+1); diverges for |x| > 1.
inline SeriesResult atan_maclaurin(const FixedReal& x, int n_max, const Precision& prec) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0");
  const int scale = prec.working_scale();
  const FixedReal x_squared = multiply(x, x, prec);
  FixedReal power = x.round_to(scale);  // x^(2n+1)
  FixedReal sum = FixedReal(0L).round_to(scale);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) power = multiply(power, x_squared, prec);
    const FixedReal term = divide(power, FixedReal(2L * n + 1), prec);
    sum = (n % 2 == 0) ? sum + term : sum - term;
  }
  return {sum, n_max + 1, SeriesId::Maclaurin};
}

// Euler's series sum_n 2^(2n) (n!)^2 / (2n+1)! * x^(2n+1) / (1+x^2)^(n+1).
// Successive terms differ by the factor 2n/(2n+1) * x^2/(1+x^2).
inline SeriesResult atan_euler(const FixedReal& x, int n_max, const Precision& prec) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 0");
  const FixedReal x_squared = multiply(x, x, prec);
  const FixedReal one_plus = FixedReal(1L) + x_squared;
  const FixedReal ratio = divide(x_squared, one_plus, prec);
  FixedReal term = divide(x, one_plus, prec);
  FixedReal sum = term;
  for (int n = 1; n <= n_max; ++n) {
    term = divide(multiply(term, ratio, prec).times(2L * n), FixedReal(2L * n + 1), prec);
    sum += term;
  }
  return {sum, n_max + 1, SeriesId::Euler};
}

// The complex-valued form of the expansion in double precision:
//   i sum_m sum_{n<n_max} x^(2n+1) / ((2M)^(2n+1) (2n+1))
//       * [(x g + i)^-(2n+1) - (x g - i)^-(2n+1)],  g = (m - 1/2)/M.
inline double atan_complex_oracle(double x, int subintervals, int n_max) {
  using Complex = std::complex<double>;
  const Complex i(0.0, 1.0);
  Complex total(0.0, 0.0);
  const double scaled = x / (2.0 * subintervals);
  for (int m = 1; m <= subintervals; ++m) {
    const double u = x * (m - 0.5) / subintervals;
    const Complex plus = 1.0 / (u + i);
    const Complex minus = 1.0 / (u - i);
    const Complex plus_sq = plus * plus;
    const Complex minus_sq = minus * minus;
    Complex plus_pow = plus;
    Complex minus_pow = minus;
    double scaled_pow = scaled;
    for (int n = 0; n < n_max; ++n) {
      if (n > 0) {
        plus_pow *= plus_sq;
        minus_pow *= minus_sq;
        scaled_pow *= scaled * scaled;
      }
      total += scaled_pow / (2.0 * n + 1) * (plus_pow - minus_pow);
    }
  }
  return (i * total).real();
}

// Terms needed so the truncated tail of the expansion falls below
// 10^-target_scale. The slowest node is m = 1, whose terms shrink by
// r = q/(1+q), q = (x/2M)^2, with the tail bounded by r^N * 2/(1-r).
inline int terms_for_scale(double abs_x, int subintervals, int target_scale) {
  if (abs_x == 0.0) return 1;
  const double log_q = 2.0 * (std::log10(abs_x) - std::log10(2.0 * subintervals));
  const double log1p_q = std::log10(1.0 + std::pow(10.0, log_q));
  const double digits_per_term = log1p_q - log_q;  // -log10 r
  const double tail_factor = std::log10(2.0) + log1p_q;  // log10(2/(1-r))
  const double needed = (target_scale + tail_factor) / digits_per_term;
  return std::max(1, static_cast<int>(std::ceil(needed)) + 2);
}

// Evaluates the expansion with n_max chosen for the requested precision.
template <class Argument>
SeriesResult atan_to_precision(const Argument& x, int subintervals, const Precision& prec) {
  const int n_max = terms_for_scale(std::fabs(x.to_double()), subintervals,
                                    prec.working_scale());
  const Precision working = Precision::for_series(prec.digits(), n_max, subintervals);
  SeriesResult result = atan_emi(x, subintervals, n_max,
                                 working.guard() > prec.guard() ? working : prec);
  result.value = result.value.round_to(prec.working_scale());
  return result;
}

// Reference arctangent: the expansion with M ~ |x| so every node converges
// at least as fast as (1/4)/(1 + 1/4) per term.
template <class Argument>
FixedReal reference_atan(const Argument& x, const Precision& prec) {
  const double magnitude = std::fabs(x.to_double());
  const int subintervals = std::max(1, static_cast<int>(std::ceil(magnitude)));
  return atan_to_precision(x, subintervals, prec.with_extra_guard(5)).value.round_to(
      prec.working_scale());
}

}  // namespace emiatan
