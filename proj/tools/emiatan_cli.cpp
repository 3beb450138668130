// emiatan: arctangent and pi from the subinterval midpoint expansion.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "emiatan/emiatan.hpp"

namespace {

using namespace emiatan;

struct CommonFlags {
  int digits = 30;
  std::optional<int> guard;
  int subintervals = 1;
  std::optional<int> n_max;
  std::string out;
  bool report = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_subintervals = true) {
  cmd->add_option("--digits", flags.digits, "Decimal digits after the point")
      ->check(CLI::Range(0, 1000000));
  cmd->add_option("--guard", flags.guard, "Guard digits (overrides the computed budget)")
      ->check(CLI::Range(10, 100000));
  if (with_subintervals) {
    cmd->add_option("-M", flags.subintervals, "Subintervals")->check(CLI::PositiveNumber);
  }
  cmd->add_option("-n,--n-max", flags.n_max, "Series terms")->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "Write the result to a file");
  cmd->add_flag("--report", flags.report, "Print a run report to stderr");
}

Precision precision_for(const CommonFlags& flags, int n_max, int subintervals) {
  if (flags.guard) return Precision(flags.digits, *flags.guard);
  return Precision::for_series(flags.digits, n_max, subintervals);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw std::runtime_error("write failed");
    }
  }

 private:
  std::ofstream file_;
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string echo(int argc, char** argv) {
  std::string line;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) line += ' ';
    line += argv[i];
  }
  return line;
}

void emit_report(const CommonFlags& flags, RunReport report) {
  if (flags.report) std::cerr << report.to_text();
}

// ---------------------------------------------------------------------------

struct AtanArgs {
  CommonFlags common;
  std::string x;
  bool range_reduce = false;
  bool show_error = false;
};

int run_atan(const AtanArgs& args, const std::string& command) {
  const Stopwatch clock;
  const FixedReal x = FixedReal::parse(args.x);
  const int m = args.common.subintervals;
  const bool reduce = args.range_reduce && abs(x) > FixedReal(1L);

  // Series argument: x, or 1/x when reducing.
  const Precision probe(args.common.digits, args.common.guard.value_or(10));
  const FixedReal argument =
      reduce ? divide(FixedReal(1L), x, probe.with_extra_guard(10)) : x;
  const int n_max = args.common.n_max.value_or(
      terms_for_scale(std::fabs(argument.to_double()), m, probe.working_scale() + 2));
  const Precision prec = precision_for(args.common, n_max, m);

  FixedReal value = atan_emi(reduce ? divide(FixedReal(1L), x, prec) : x, m, n_max, prec).value;
  if (reduce) {
    const FixedReal half_pi = divide(self_check_pi(prec.working_scale()), FixedReal(2L), prec);
    value = (x.sign() > 0 ? half_pi : -half_pi) - value;
  }

  Output out(args.common.out);
  const std::string text = value.digits(args.common.digits);
  out.stream() << text << '\n';
  if (args.show_error) {
    const FixedReal error = abs(value - reference_atan(x, prec.with_extra_guard(5)));
    out.stream() << "abs_error " << error.scientific(6) << '\n';
  }
  out.finish();
  emit_report(args.common, {command, prec.digits(), prec.guard(), clock.ms(), n_max, text});
  return 0;
}

// ---------------------------------------------------------------------------

struct PiArgs {
  CommonFlags common;
  int k = 2;
  int gamma_grain = 0;
  bool ceil = false;
  std::optional<int> second_arg_digits;
  bool exact = false;
  bool fixed = false;
  std::size_t digit_cap = kDefaultDigitCap;
  bool report_rate = false;
  int rate_from = 2;
  int rate_to = 30;
  std::string load;
  std::string save;
};

MachinTwoTerm load_formula(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return MachinTwoTerm::from_record(line);
  }
  throw Error(ErrorKind::ParseError, "no formula record in '" + path + "'");
}

int run_pi(const PiArgs& args, const std::string& command) {
  const Stopwatch clock;
  const int digits = args.common.digits;
  const int m = args.common.subintervals;
  if (args.k < 2) throw Error(ErrorKind::InvalidArgument, "pi needs -k >= 2");

  MachinTwoTerm formula;
  if (!args.load.empty()) {
    formula = load_formula(args.load);
  } else {
    ForgeOptions options;
    options.gamma_grain = args.gamma_grain;
    options.rounding = args.ceil ? RoundingMode::Ceil : RoundingMode::Floor;
    options.second_arg_digits = args.second_arg_digits.value_or(digits + 10);
    options.mode = args.exact   ? SecondArgMode::Exact
                   : args.fixed ? SecondArgMode::Fixed
                                : SecondArgMode::Auto;
    options.digit_cap = args.digit_cap;
    formula = forge_formula(args.k, options);
  }
  if (!args.save.empty()) {
    std::ofstream record(args.save);
    record << formula.to_record() << '\n';
    if (!record) throw std::runtime_error("cannot write '" + args.save + "'");
  }

  const Precision sizing = machin_precision(digits, formula.k, m, 1);
  const int n_auto = machin_terms_for(formula, m, sizing);
  int n_max = args.common.n_max.value_or(n_auto);
  if (args.report_rate) n_max = std::max(n_max, args.rate_to);
  Precision prec = machin_precision(digits, formula.k, m, n_max);
  if (args.common.guard) prec = Precision(digits, *args.common.guard);

  const std::vector<FixedReal> sums = machin_partial_sums(formula, m, n_max, prec);
  const int used = args.common.n_max.value_or(n_auto);
  const FixedReal pi = sums[std::min(used, n_max) - 1];

  const FixedReal reference = self_check_pi(std::max(digits, 1) + 10);
  check_agreement(pi, reference, digits);

  Output out(args.common.out);
  const std::string text = pi.digits(digits);
  out.stream() << text << '\n';
  if (args.report_rate) {
    const int from = std::max(1, args.rate_from);
    const int to = std::min(args.rate_to, n_max);
    int low = 0;
    int high = 0;
    bool first = true;
    for (int n = from + 1; n <= to; ++n) {
      const int before = correct_digits(sums[n - 2], reference);
      const int after = correct_digits(sums[n - 1], reference);
      const int gain = after - before;
      out.stream() << "n=" << n << " correct=" << after << " gain=" << gain << '\n';
      low = first ? gain : std::min(low, gain);
      high = first ? gain : std::max(high, gain);
      first = false;
    }
    out.stream() << "rate min=" << low << " max=" << high << '\n';
  }
  out.finish();
  emit_report(args.common, {command, prec.digits(), prec.guard(), clock.ms(), n_max, text});
  return 0;
}

// ---------------------------------------------------------------------------

struct ConvergenceArgs {
  CommonFlags common;
  std::string x_min = "-20";
  std::string x_max = "20";
  std::string step = "pi/20";
  std::vector<std::string> series = {"maclaurin", "euler", "emi"};
  std::vector<int> subintervals = {1, 2, 3, 4, 5};
  std::string format = "csv";
};

void write_text_table(std::ostream& out, const ConvergenceTable& table) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %16s %3s %5s %14s %12s\n", "series", "x", "M",
                "n_max", "abs_error", "log10_error");
  out << line;
  for (const ConvergenceRecord& r : table.records) {
    std::snprintf(line, sizeof line, "%-10s %16s %3d %5d %14s %12s\n",
                  std::string(to_string(r.series_id)).c_str(),
                  r.x.round_to(12).digits(12).c_str(), r.subintervals, r.n_max,
                  r.abs_error.scientific(6).c_str(), format_log10(r.log10_error).c_str());
    out << line;
  }
}

int run_convergence_cmd(const ConvergenceArgs& args, const std::string& command) {
  const Stopwatch clock;
  ConvergenceOptions options;
  options.x_min = BigRational::parse(args.x_min);
  options.x_max = BigRational::parse(args.x_max);
  options.step = GridStep::parse(args.step);
  options.series.clear();
  for (const std::string& name : args.series) options.series.push_back(parse_series_id(name));
  options.subintervals = args.subintervals;
  options.n_max = args.common.n_max.value_or(10);
  options.digits = std::max(args.common.digits, 60);

  const ConvergenceTable table = run_convergence(options);
  Output out(args.common.out);
  std::ostringstream body;
  if (args.format == "csv") {
    write_convergence_csv(body, table);
  } else {
    write_text_table(body, table);
  }
  out.stream() << body.str();
  out.finish();
  emit_report(args.common, {command, table.digits_used, 0, clock.ms(),
                            static_cast<long>(table.records.size()), body.str()});
  return 0;
}

// ---------------------------------------------------------------------------

struct IntegrateArgs {
  CommonFlags common;
  std::string integrand;
  std::string a;
  std::string b;
  int order = 0;
};

std::vector<BigRational> parse_coefficients(const std::string& list) {
  std::vector<BigRational> coeffs;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) coeffs.push_back(BigRational::parse(item));
  if (coeffs.empty()) throw Error(ErrorKind::ParseError, "empty coefficient list");
  return coeffs;
}

int run_integrate(const IntegrateArgs& args, const std::string& command) {
  const Stopwatch clock;
  const int m = args.common.subintervals;
  const int order = args.order;
  const BigRational a = BigRational::parse(args.a);
  const BigRational b = BigRational::parse(args.b);
  const Precision prec = precision_for(args.common, order + 1, m);

  FixedReal value;
  std::optional<FixedReal> error;
  if (args.integrand.rfind("poly:", 0) == 0) {
    const std::vector<BigRational> coeffs = parse_coefficients(args.integrand.substr(5));
    const ExactField field;
    const BigRational exact_value =
        emi_integrate(field, polynomial_provider(field, coeffs), {m, order, a, b});
    value = FixedReal::from_rational(exact_value, prec.working_scale());
    error = FixedReal::from_rational(abs(exact_value - polynomial_integral(coeffs, a, b)),
                                     prec.working_scale());
  } else {
    FixedReal x(1L);
    if (args.integrand.rfind("atan-kernel:", 0) == 0) {
      x = FixedReal::parse(args.integrand.substr(12));
    } else if (args.integrand != "runge") {
      throw Error(ErrorKind::ParseError, "unknown integrand '" + args.integrand +
                                             "' (poly:c0,c1,..., runge, atan-kernel:x)");
    }
    const FixedField field{prec};
    const int scale = prec.working_scale();
    const QuadratureSpec<FixedField> spec{m, order, FixedReal::from_rational(a, scale),
                                          FixedReal::from_rational(b, scale)};
    value = emi_integrate(field, atan_kernel_provider(x, prec), spec);
    // integral of x / (1 + x^2 t^2) over (a, b) = atan(x b) - atan(x a)
    const Precision ref = prec.with_extra_guard(5);
    const FixedReal upper = reference_atan(multiply(x, spec.b, ref), ref);
    const FixedReal lower = reference_atan(multiply(x, spec.a, ref), ref);
    error = abs(value - (upper - lower));
  }

  Output out(args.common.out);
  const std::string text = value.digits(args.common.digits);
  out.stream() << text << '\n';
  if (error) out.stream() << "abs_error " << error->scientific(6) << '\n';
  out.finish();
  emit_report(args.common, {command, prec.digits(), prec.guard(), clock.ms(), order + 1, text});
  return 0;
}

// ---------------------------------------------------------------------------

struct GammaArgs {
  CommonFlags common;
  int k = 27;
  int grain = 0;
  bool ceil = false;
  bool residual = false;
  bool second_arg = false;
  int second_arg_digits = 21;
};

int run_gamma(const GammaArgs& args, const std::string& command) {
  const Stopwatch clock;
  const int digits = std::max(args.common.digits, 60);
  const Precision prec = args.common.guard ? Precision(digits, *args.common.guard)
                                           : Precision(digits);
  const BigRational gamma =
      gamma_select(args.k, args.grain, args.ceil ? RoundingMode::Ceil : RoundingMode::Floor,
                   prec);
  Output out(args.common.out);
  std::string text = gamma.is_integer() ? gamma.numerator().get_str() : gamma.to_string();
  out.stream() << text << '\n';
  if (args.residual) {
    const FixedReal lead(mpz_class(mpz_class(1) << (args.k - 1)), 0);
    const FixedReal ratio =
        divide(lead, FixedReal::from_rational(gamma, prec.working_scale()), prec);
    const FixedReal quarter_pi = divide(self_check_pi(digits + 10), FixedReal(4L), prec);
    out.stream() << "residual " << (ratio - quarter_pi).scientific(6) << '\n';
  }
  if (args.second_arg) {
    const FixedReal probe = second_argument_fixed(args.k, gamma, Precision(30));
    const int scale = scale_for_significant(probe.decimal_exponent(), args.second_arg_digits);
    const FixedReal value = second_argument_fixed(args.k, gamma, Precision(scale));
    out.stream() << "second_arg " << value.scientific(args.second_arg_digits) << '\n';
  }
  out.finish();
  emit_report(args.common, {command, prec.digits(), prec.guard(), clock.ms(), args.k, text});
  return 0;
}

// ---------------------------------------------------------------------------

int run_self_check(const CommonFlags& flags, const std::string& command) {
  const Stopwatch clock;
  const int digits = std::max(flags.digits, 1);
  const FixedReal pi = self_check_pi(digits);
  Output out(flags.out);
  const std::string text = pi.digits(digits);
  out.stream() << text << '\n';
  out.finish();
  const Precision prec = self_check_precision(digits);
  emit_report(flags, {command, prec.digits(), prec.guard(), clock.ms(), 0, text});
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SelfCheckFailed: return 3;
    case ErrorKind::DigitCapExceeded: return 4;
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ZeroArgument:
    case ErrorKind::EmptyInterval:
    case ErrorKind::DomainError:
    case ErrorKind::AmbiguousRounding:
    case ErrorKind::InsufficientScale: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arctangent and pi from the subinterval midpoint expansion"};
  app.require_subcommand(1);

  AtanArgs atan_args;
  CLI::App* atan_cmd = app.add_subcommand("atan", "arctan(x)");
  add_common(atan_cmd, atan_args.common);
  atan_cmd->add_option("x", atan_args.x, "Argument (decimal)")->required();
  atan_cmd->add_flag("--range-reduce", atan_args.range_reduce,
                     "Use pi/2 - arctan(1/x) for |x| > 1");
  atan_cmd->add_flag("--error", atan_args.show_error, "Also print |value - arctan(x)|");

  PiArgs pi_args;
  CLI::App* pi_cmd = app.add_subcommand("pi", "pi from a two-term Machin-like formula");
  add_common(pi_cmd, pi_args.common);
  pi_cmd->add_option("-k", pi_args.k, "Nested-radical index (>= 2)");
  pi_cmd->add_option("--gamma-grain", pi_args.gamma_grain, "gamma on a 10^-m grid");
  pi_cmd->add_flag("--ceil", pi_args.ceil, "Round gamma up instead of down");
  pi_cmd->add_option("--second-arg-digits", pi_args.second_arg_digits,
                     "Significant digits kept in the second argument");
  auto* exact_flag = pi_cmd->add_flag("--exact", pi_args.exact, "Exact second argument");
  pi_cmd->add_flag("--fixed", pi_args.fixed, "Fixed-point second argument")
      ->excludes(exact_flag);
  pi_cmd->add_option("--digit-cap", pi_args.digit_cap, "Digit budget for exact mode");
  pi_cmd->add_flag("--report-rate", pi_args.report_rate, "Print digits gained per term");
  pi_cmd->add_option("--rate-from", pi_args.rate_from, "First n_max of the rate report");
  pi_cmd->add_option("--rate-to", pi_args.rate_to, "Last n_max of the rate report");
  pi_cmd->add_option("--load", pi_args.load, "Read the formula record from a file");
  pi_cmd->add_option("--save", pi_args.save, "Write the formula record to a file");

  ConvergenceArgs conv_args;
  CLI::App* conv_cmd = app.add_subcommand("convergence", "Error table over an x grid");
  add_common(conv_cmd, conv_args.common, false);
  conv_cmd->add_option("--x-min", conv_args.x_min, "Grid start");
  conv_cmd->add_option("--x-max", conv_args.x_max, "Grid end");
  conv_cmd->add_option("--step", conv_args.step, "Grid step (decimal or pi/k)");
  conv_cmd->add_option("--series", conv_args.series, "maclaurin,euler,emi,emi_m1")
      ->delimiter(',');
  conv_cmd->add_option("-M", conv_args.subintervals, "Subinterval counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--format", conv_args.format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}));

  IntegrateArgs int_args;
  CLI::App* int_cmd = app.add_subcommand("integrate", "Midpoint integration with corrections");
  add_common(int_cmd, int_args.common);
  int_cmd->add_option("integrand", int_args.integrand, "poly:c0,c1,..., runge, atan-kernel:x")
      ->required();
  int_cmd->add_option("a", int_args.a, "Lower limit")->required();
  int_cmd->add_option("b", int_args.b, "Upper limit")->required();
  int_cmd->add_option("-N", int_args.order, "Last derivative index")
      ->check(CLI::NonNegativeNumber);

  GammaArgs gamma_args;
  CLI::App* gamma_cmd = app.add_subcommand("gamma", "Select gamma for index k");
  add_common(gamma_cmd, gamma_args.common, false);
  gamma_cmd->add_option("-k", gamma_args.k, "Nested-radical index (>= 2)");
  gamma_cmd->add_option("--grain", gamma_args.grain, "gamma on a 10^-m grid");
  gamma_cmd->add_flag("--ceil", gamma_args.ceil, "Round up instead of down");
  gamma_cmd->add_flag("--residual", gamma_args.residual, "Print 2^(k-1)/gamma - pi/4");
  gamma_cmd->add_flag("--second-arg", gamma_args.second_arg, "Print the second argument");
  gamma_cmd->add_option("--second-arg-digits", gamma_args.second_arg_digits,
                        "Significant digits of the second argument");

  CommonFlags check_flags;
  CLI::App* check_cmd = app.add_subcommand("self-check", "pi from two independent formulas");
  add_common(check_cmd, check_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = echo(argc, argv);
  try {
    if (atan_cmd->parsed()) return run_atan(atan_args, command);
    if (pi_cmd->parsed()) return run_pi(pi_args, command);
    if (conv_cmd->parsed()) return run_convergence_cmd(conv_args, command);
    if (int_cmd->parsed()) return run_integrate(int_args, command);
    if (gamma_cmd->parsed()) return run_gamma(gamma_args, command);
    if (check_cmd->parsed()) return run_self_check(check_flags, command);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
