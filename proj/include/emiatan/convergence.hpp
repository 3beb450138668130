#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emiatan/error.hpp"
#include "emiatan/fixed_real.hpp"
#include "emiatan/pi_reference.hpp"
#include "emiatan/precision.hpp"
#include "emiatan/series.hpp"

namespace emiatan {

struct ConvergenceRecord {
  SeriesId series_id = SeriesId::EmiGeneral;
  FixedReal x;
  int subintervals = 0;  // 0 for series without subintervals
  int n_max = 0;
  FixedReal abs_error;
  double log10_error = 0.0;  // -inf when the error vanishes at working scale
};

// Grid step, either a decimal or a rational multiple of pi ("pi/20", "pi").
struct GridStep {
  BigRational multiple;
  bool of_pi = false;

  static GridStep parse(std::string_view text) {
    if (text.rfind("pi", 0) == 0) {
      std::string_view rest = text.substr(2);
      if (rest.empty()) return {BigRational(1), true};
      if (rest[0] == '/') {
        return {BigRational(1) / BigRational(detail::parse_integer(rest.substr(1))), true};
      }
      if (rest[0] == '*') return {BigRational::parse(rest.substr(1)), true};
      throw Error(ErrorKind::ParseError, "bad grid step '" + std::string(text) + "'");
    }
    return {BigRational::parse(text), false};
  }
};

struct ConvergenceOptions {
  BigRational x_min = BigRational(-20);
  BigRational x_max = BigRational(20);
  GridStep step = {BigRational(1, 20), true};
  std::vector<SeriesId> series = {SeriesId::Maclaurin, SeriesId::Euler,
                                  SeriesId::EmiGeneral};
  std::vector<int> subintervals = {1, 2, 3, 4, 5};
  int n_max = 10;
  int digits = 60;
  int dominance_digits = 25;  // reference digits required beyond every error
};

struct ConvergenceTable {
  std::vector<ConvergenceRecord> records;
  int digits_used = 0;  // reference precision after any escalation
};

inline SeriesId parse_series_id(std::string_view name) {
  for (SeriesId id : {SeriesId::Maclaurin, SeriesId::Euler, SeriesId::EmiM1,
                      SeriesId::EmiGeneral}) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::ParseError, "unknown series '" + std::string(name) + "'");
}

namespace detail {

inline std::vector<FixedReal> grid_points(const ConvergenceOptions& options,
                                          const Precision& prec) {
  if (options.step.multiple <= BigRational(0)) {
    throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
  }
  if (options.x_max < options.x_min) {
    throw Error(ErrorKind::InvalidArgument, "grid needs x_min <= x_max");
  }
  const int scale = prec.working_scale();
  FixedReal step = FixedReal::from_rational(options.step.multiple, scale);
  if (options.step.of_pi) {
    step = multiply(step, self_check_pi(prec.digits() + 5), prec);
  }
  const FixedReal start = FixedReal::from_rational(options.x_min, scale);
  const FixedReal stop = FixedReal::from_rational(options.x_max, scale);
  std::vector<FixedReal> points;
  for (long j = 0;; ++j) {
    FixedReal x = start + step.times(j);
    if (x > stop) break;
    points.push_back(std::move(x));
  }
  return points;
}

inline ConvergenceTable run_convergence_at(const ConvergenceOptions& options, int digits) {
  const Precision prec = Precision::for_series(digits, options.n_max, 5);
  const std::vector<FixedReal> xs = grid_points(options, prec);
  ConvergenceTable table;
  table.digits_used = digits;
  std::vector<FixedReal> references;
  references.reserve(xs.size());
  for (const FixedReal& x : xs) references.push_back(reference_atan(x, prec));

  for (SeriesId id : options.series) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const FixedReal& x = xs[i];
      std::vector<int> ms;
      if (id == SeriesId::EmiGeneral) {
        ms = options.subintervals;
        std::sort(ms.begin(), ms.end());
      } else {
        ms = {id == SeriesId::EmiM1 ? 1 : 0};
      }
      for (int m : ms) {
        FixedReal value;
        switch (id) {
          case SeriesId::Maclaurin: value = atan_maclaurin(x, options.n_max, prec).value; break;
          case SeriesId::Euler: value = atan_euler(x, options.n_max, prec).value; break;
          case SeriesId::EmiM1: value = atan_emi_m1(x, options.n_max, prec).value; break;
          case SeriesId::EmiGeneral: value = atan_emi(x, m, options.n_max, prec).value; break;
          case SeriesId::ComplexOracle:
            throw Error(ErrorKind::InvalidArgument, "the double oracle has no grid rows");
        }
        ConvergenceRecord record;
        record.series_id = id;
        record.x = x;
        record.subintervals = m;
        record.n_max = options.n_max;
        record.abs_error = abs(value - references[i]);
        record.log10_error = record.abs_error.log10_abs();
        table.records.push_back(std::move(record));
      }
    }
  }
  return table;
}

}  // namespace detail

// One row per (series, x, M), ordered by series, then x, then M. The reference
// precision starts at options.digits and is raised until every non-zero error
// sits at least dominance_digits above the reference's last digit.
inline ConvergenceTable run_convergence(const ConvergenceOptions& options) {
  int digits = options.digits;
  for (int attempt = 0; attempt < 4; ++attempt) {
    ConvergenceTable table = detail::run_convergence_at(options, digits);
    double smallest = std::numeric_limits<double>::infinity();
    for (const ConvergenceRecord& record : table.records) {
      if (!record.abs_error.is_zero()) smallest = std::min(smallest, record.log10_error);
    }
    if (!std::isfinite(smallest)) return table;
    const int needed =
        static_cast<int>(std::ceil(-smallest)) + options.dominance_digits;
    if (needed <= digits) return table;
    digits = needed + 5;
  }
  throw Error(ErrorKind::InvalidArgument,
              "reference precision did not settle for the convergence grid");
}

inline std::string format_log10(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

inline constexpr std::string_view kConvergenceCsvHeader =
    "series,x,M,n_max,abs_error,log10_error";

inline void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << kConvergenceCsvHeader << '\n';
  for (const ConvergenceRecord& r : table.records) {
    out << to_string(r.series_id) << ',' << r.x.round_to(12).digits(12) << ','
        << r.subintervals << ',' << r.n_max << ',' << r.abs_error.scientific(6) << ','
        << format_log10(r.log10_error) << '\n';
  }
}

// Summary of one CLI computation. Everything except wall_ms is a function of
// the inputs.
struct RunReport {
  std::string command;
  int digits = 0;
  int guard = 0;
  double wall_ms = 0.0;
  long terms = 0;
  std::string result;

  std::string digest() const {
    std::string plain;
    for (char c : result) {
      if (c >= '0' && c <= '9') plain += c;
    }
    if (plain.size() <= 40) return plain;
    return plain.substr(0, 20) + "..." + plain.substr(plain.size() - 20);
  }

  std::string to_text() const {
    std::ostringstream out;
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", wall_ms);
    out << "command: " << command << '\n'
        << "precision: " << digits << " digits + " << guard << " guard\n"
        << "wall_ms: " << wall << '\n'
        << "terms: " << terms << '\n'
        << "digest: " << digest() << '\n';
    return out.str();
  }
};

}  // namespace emiatan
