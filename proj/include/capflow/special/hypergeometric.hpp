#pragma once

// Gauss hypergeometric 2F1 on the real line (with the z + i0 / z - i0 limits
// on the cut z > 1) and the Appell function F1.
//
// Every evaluation comes in two flavours: an `evaluate_*` function that
// returns an EvaluationReport and never throws for numerical reasons, and a
// plain function that returns the value and throws DegenerateParametersError
// or ConvergenceError when the report says the value must not be used.
//
// Routes used for 2F1(a, b; c; z):
//   a or b a non-positive integer   finite polynomial, any z
//   0 <= z <= 1/2                   Gauss series
//   1/2 < z < 1                     1 - z connection formula unless c - a - b
//                                   is (close to) an integer, else the series
//   z = 1                           Gauss summation, needs c - a - b > 0
//   z < 0                           Pfaff transformation onto z / (z - 1)
//   z > 1                           1 - z or 1 / z connection formula, with the
//                                   cut limit chosen by Branch

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "capflow/errors.hpp"
#include "capflow/special/gamma.hpp"

namespace capflow::special {

// Side of the cut z > 1: above is z + i0, below is z - i0. The two limits of
// a function with real parameters are complex conjugates.
enum class Branch
{
  above,
  below,
};

inline constexpr std::string_view to_string(Branch branch)
{
  return branch == Branch::above ? "above" : "below";
}

struct EvaluationReport
{
  std::complex<double> value{};
  int terms_used = 0;
  bool converged = false;
  bool degenerate_parameters = false;
  std::string_view route;

  bool usable() const noexcept
  {
    return converged && !degenerate_parameters && std::isfinite(value.real()) &&
           std::isfinite(value.imag());
  }
};

// Series stop once |term| < series_relative_tolerance * |partial sum| for
// series_quiet_terms consecutive terms; series_term_cap bounds each index.
inline constexpr double series_relative_tolerance = 1e-16;
inline constexpr int series_quiet_terms = 3;
inline constexpr int series_term_cap = 10000;

namespace detail {

// Below this distance from an integer a connection formula loses more than
// four digits to cancellation between its two halves.
inline constexpr double connection_guard = 1e-4;

inline bool is_zero_parameter(double x) { return std::abs(x) < integer_tolerance; }

inline EvaluationReport degenerate_report(std::string_view route)
{
  EvaluationReport r;
  r.degenerate_parameters = true;
  r.route = route;
  return r;
}

inline EvaluationReport real_report(double value, int terms, bool converged, std::string_view route)
{
  EvaluationReport r;
  r.value = {value, 0.0};
  r.terms_used = terms;
  r.converged = converged;
  r.route = route;
  return r;
}

// A non-positive integer numerator parameter whose series ends no later than
// the first vanishing denominator. Returns the number of non-zero terms.
inline std::optional<int> polynomial_length(double a, double b, double c)
{
  auto degree = [](double p) -> std::optional<int> {
    if (is_nonpositive_integer(p))
      return static_cast<int>(-std::round(p));
    return std::nullopt;
  };
  std::optional<int> d;
  for (double p : {a, b})
    if (auto dp = degree(p); dp && (!d || *dp < *d))
      d = dp;
  if (!d)
    return std::nullopt;
  if (auto dc = degree(c); dc && *dc < *d)
    return std::nullopt;
  return *d + 1;
}

// sum_k (a)_k (b)_k / ((c)_k k!) z^k. Converges for |z| < 1, or terminates.
inline EvaluationReport gauss_series(double a, double b, double c, double z)
{
  double term = 1.0;
  double sum = 1.0;
  int quiet = 0;
  for (int k = 0; k < series_term_cap; ++k) {
    const double num = (a + k) * (b + k);
    if (is_zero_parameter(a + k) || is_zero_parameter(b + k) || z == 0.0)
      return real_report(sum, k + 1, true, "series");
    if (is_zero_parameter(c + k))
      return degenerate_report("series");
    term *= num / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) < series_relative_tolerance * std::abs(sum)) {
      if (++quiet >= series_quiet_terms)
        return real_report(sum, k + 2, true, "series");
    } else {
      quiet = 0;
    }
  }
  return real_report(sum, series_term_cap, false, "series");
}

inline EvaluationReport polynomial(double a, double b, double c, double z, int length)
{
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k + 1 < length; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
  }
  return real_report(sum, length, true, "polynomial");
}

// |x|^s times the cut limit of the phase: the argument of (-z) or (1 - z) is
// -pi above the cut and +pi below it.
inline std::complex<double> cut_power(double magnitude, double s, Branch branch)
{
  const double sign = branch == Branch::above ? -1.0 : 1.0;
  const double mod = std::pow(magnitude, s);
  return {mod * std::cos(std::numbers::pi * s), sign * mod * std::sin(std::numbers::pi * s)};
}

inline EvaluationReport combine(std::complex<double> value, const EvaluationReport& first,
                                const EvaluationReport& second, std::string_view route)
{
  EvaluationReport r;
  r.value = value;
  r.terms_used = first.terms_used + second.terms_used;
  r.converged = first.converged && second.converged;
  r.degenerate_parameters = first.degenerate_parameters || second.degenerate_parameters;
  r.route = route;
  return r;
}

// 0 <= z < 1, c not a pole (checked by the caller).
inline EvaluationReport gauss_unit_interval(double a, double b, double c, double z)
{
  const double s = c - a - b;
  if (z <= 0.5 || distance_to_integer(s) < connection_guard)
    return gauss_series(a, b, c, z);

  // 2F1(a,b;c;z) = A 2F1(a,b;1-s;1-z) + B (1-z)^s 2F1(c-a,c-b;1+s;1-z)
  const double w = 1.0 - z;
  const double gc = std::tgamma(c);
  const double coef_a = gc * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
  const double coef_b = gc * std::tgamma(-s) * rgamma(a) * rgamma(b);
  EvaluationReport first = coef_a != 0.0 ? gauss_series(a, b, 1.0 - s, w) : real_report(0.0, 0, true, "");
  EvaluationReport second =
    coef_b != 0.0 ? gauss_series(c - a, c - b, 1.0 + s, w) : real_report(0.0, 0, true, "");
  const double value = coef_a * first.value.real() + coef_b * std::pow(w, s) * second.value.real();
  return combine({value, 0.0}, first, second, "one_minus_z");
}

} // namespace detail

// Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)), the value of 2F1 at z = 1.
inline EvaluationReport evaluate_gauss_sum(double a, double b, double c)
{
  if (auto len = detail::polynomial_length(a, b, c))
    return detail::polynomial(a, b, c, 1.0, *len);
  if (is_nonpositive_integer(c))
    return detail::degenerate_report("gauss_sum");
  const double s = c - a - b;
  if (!(s > 0.0))
    return detail::real_report(std::numeric_limits<double>::infinity(), 0, false, "gauss_sum");
  if (is_nonpositive_integer(s))
    return detail::degenerate_report("gauss_sum");
  const double v = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
  return detail::real_report(v, 0, true, "gauss_sum");
}

// Real 2F1 for z <= 1.
inline EvaluationReport evaluate_gauss_2f1(double a, double b, double c, double z)
{
  if (!std::isfinite(z) || z > 1.0)
    throw DomainError("real 2F1 requires z <= 1; use the continued evaluation for z > 1");
  if (a > b) // one fixed order so that the transformation choice cannot break (a, b) symmetry
    std::swap(a, b);
  if (auto len = detail::polynomial_length(a, b, c))
    return detail::polynomial(a, b, c, z, *len);
  if (is_nonpositive_integer(c))
    return detail::degenerate_report("pole_in_c");
  if (z == 0.0)
    return detail::real_report(1.0, 1, true, "series");
  if (z == 1.0)
    return evaluate_gauss_sum(a, b, c);
  if (z > 0.0)
    return detail::gauss_unit_interval(a, b, c, z);

  // Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)). Prefer the
  // variant whose transformed series terminates.
  const double w = z / (z - 1.0);
  double p = a;
  double q = c - b;
  if (!detail::polynomial_length(p, q, c) && detail::polynomial_length(c - a, b, c)) {
    p = b;
    q = c - a;
  }
  EvaluationReport inner = detail::polynomial_length(p, q, c)
                             ? detail::polynomial(p, q, c, w, *detail::polynomial_length(p, q, c))
                             : detail::gauss_unit_interval(p, q, c, w);
  inner.value *= std::pow(1.0 - z, -p);
  inner.route = inner.route == "one_minus_z" ? "pfaff+one_minus_z" : "pfaff";
  return inner;
}

// 2F1 on the cut z > 1, approached from the given side.
inline EvaluationReport evaluate_gauss_2f1_continued(double a, double b, double c, double z,
                                                     Branch branch = Branch::above)
{
  if (!std::isfinite(z) || !(z > 1.0))
    throw DomainError("continued 2F1 requires z > 1");
  if (a > b)
    std::swap(a, b);
  if (auto len = detail::polynomial_length(a, b, c))
    return detail::polynomial(a, b, c, z, *len);
  if (is_nonpositive_integer(c))
    return detail::degenerate_report("pole_in_c");

  const double s = c - a - b;
  const double d = a - b;
  const double s_gap = distance_to_integer(s);
  const double d_gap = distance_to_integer(d);
  const bool one_minus_z_ok = s_gap >= integer_tolerance;
  const bool inverse_z_ok = d_gap >= integer_tolerance;
  if (!one_minus_z_ok && !inverse_z_ok)
    return detail::degenerate_report("log_case");

  // 1 - z keeps the inner argument small near z = 1, 1/z far from it; a
  // near-integer gap overrides the preference.
  bool use_one_minus_z = z < 2.0 ? one_minus_z_ok : !inverse_z_ok;
  if (use_one_minus_z && s_gap < detail::connection_guard && d_gap >= detail::connection_guard)
    use_one_minus_z = false;
  if (!use_one_minus_z && d_gap < detail::connection_guard && s_gap >= detail::connection_guard &&
      one_minus_z_ok)
    use_one_minus_z = true;

  const double gc = std::tgamma(c);
  if (use_one_minus_z) {
    const double coef_a = gc * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
    const double coef_b = gc * std::tgamma(-s) * rgamma(a) * rgamma(b);
    const double u = 1.0 - z;
    EvaluationReport first = coef_a != 0.0 ? evaluate_gauss_2f1(a, b, 1.0 - s, u)
                                           : detail::real_report(0.0, 0, true, "");
    EvaluationReport second = coef_b != 0.0 ? evaluate_gauss_2f1(c - a, c - b, 1.0 + s, u)
                                            : detail::real_report(0.0, 0, true, "");
    const std::complex<double> value =
      coef_a * first.value + coef_b * detail::cut_power(z - 1.0, s, branch) * second.value;
    return detail::combine(value, first, second, "cut_one_minus_z");
  }

  const double t = 1.0 / z;
  const double coef_a = gc * std::tgamma(-d) * rgamma(b) * rgamma(c - a);
  const double coef_b = gc * std::tgamma(d) * rgamma(a) * rgamma(c - b);
  EvaluationReport first = coef_a != 0.0 ? evaluate_gauss_2f1(a, a - c + 1.0, d + 1.0, t)
                                         : detail::real_report(0.0, 0, true, "");
  EvaluationReport second = coef_b != 0.0 ? evaluate_gauss_2f1(b, b - c + 1.0, 1.0 - d, t)
                                          : detail::real_report(0.0, 0, true, "");
  const std::complex<double> value = coef_a * detail::cut_power(z, -a, branch) * first.value +
                                     coef_b * detail::cut_power(z, -b, branch) * second.value;
  return detail::combine(value, first, second, "cut_inverse_z");
}

// Any real z: real line for z <= 1, cut limit for z > 1.
inline EvaluationReport evaluate_gauss_2f1_any(double a, double b, double c, double z,
                                               Branch branch = Branch::above)
{
  return z > 1.0 ? evaluate_gauss_2f1_continued(a, b, c, z, branch)
                 : evaluate_gauss_2f1(a, b, c, z);
}

namespace detail {

inline EvaluationReport appell_double_series(double a, double b1, double b2, double c, double x,
                                             double y)
{
  double head = 1.0; // (a)_m (b1)_m / ((c)_m m!) x^m
  double sum = 0.0;
  int terms = 0;
  int quiet_rows = 0;
  for (int m = 0; m < series_term_cap; ++m) {
    double term = head;
    double row = 0.0;
    int quiet = 0;
    bool row_done = false;
    for (int n = 0; n < series_term_cap; ++n) {
      row += term;
      ++terms;
      if (std::abs(term) < series_relative_tolerance * std::abs(row)) {
        if (++quiet >= series_quiet_terms) {
          row_done = true;
          break;
        }
      } else {
        quiet = 0;
      }
      if (is_zero_parameter(a + m + n) || is_zero_parameter(b2 + n) || y == 0.0) {
        row_done = true;
        break;
      }
      if (is_zero_parameter(c + m + n))
        return degenerate_report("double_series");
      term *= (a + m + n) * (b2 + n) / ((c + m + n) * (n + 1.0)) * y;
    }
    sum += row;
    if (!row_done)
      return real_report(sum, terms, false, "double_series");
    if (std::abs(row) < series_relative_tolerance * std::abs(sum)) {
      if (++quiet_rows >= series_quiet_terms)
        return real_report(sum, terms, true, "double_series");
    } else {
      quiet_rows = 0;
    }
    if (is_zero_parameter(a + m) || is_zero_parameter(b1 + m) || x == 0.0)
      return real_report(sum, terms, true, "double_series");
    if (is_zero_parameter(c + m))
      return degenerate_report("double_series");
    head *= (a + m) * (b1 + m) / ((c + m) * (m + 1.0)) * x;
  }
  return real_report(sum, terms, false, "double_series");
}

// F1(a; b1, b2; c; 1, y) = Gamma(c) Gamma(c-a-b1) / (Gamma(c-a) Gamma(c-b1)) 2F1(a, b2; c-b1; y)
inline EvaluationReport appell_unit_boundary(double a, double b1, double b2, double c, double y,
                                             Branch branch)
{
  if (is_nonpositive_integer(c))
    return degenerate_report("boundary_reduction");
  const double s = c - a - b1;
  if (!(s > 0.0))
    return real_report(std::numeric_limits<double>::infinity(), 0, false, "boundary_reduction");
  if (is_nonpositive_integer(s))
    return degenerate_report("boundary_reduction");
  const double coef = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b1);
  EvaluationReport inner = evaluate_gauss_2f1_any(a, b2, c - b1, y, branch);
  inner.value *= coef;
  inner.route = "boundary_reduction";
  return inner;
}

} // namespace detail

// Appell F1(a; b1, b2; c; x, y) = sum_{m,n} (a)_{m+n} (b1)_m (b2)_n / ((c)_{m+n} m! n!) x^m y^n.
// Supported: the open polydisc |x|, |y| < 1; the boundary x = 1 (or y = 1)
// through the gamma-ratio reduction, with the remaining 2F1 continued past 1
// on the requested branch; and the 2F1 reductions b1 = 0, b2 = 0, x = 0, y = 0.
inline EvaluationReport evaluate_appell_f1(double a, double b1, double b2, double c, double x,
                                           double y, Branch branch = Branch::above)
{
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("Appell F1 arguments must be finite");
  if (x == 0.0 || detail::is_zero_parameter(b1))
    return evaluate_gauss_2f1_any(a, b2, c, y, branch);
  if (y == 0.0 || detail::is_zero_parameter(b2))
    return evaluate_gauss_2f1_any(a, b1, c, x, branch);
  if (x == 1.0)
    return detail::appell_unit_boundary(a, b1, b2, c, y, branch);
  if (y == 1.0)
    return detail::appell_unit_boundary(a, b2, b1, c, x, branch);
  if (std::abs(x) < 1.0 && std::abs(y) < 1.0)
    return detail::appell_double_series(a, b1, b2, c, x, y);
  throw DomainError("Appell F1 is implemented inside the unit polydisc and on x = 1 or y = 1 only");
}

namespace detail {

inline const EvaluationReport& require_usable(const EvaluationReport& r, const char* what)
{
  if (r.degenerate_parameters)
    throw DegenerateParametersError(std::string(what) + ": degenerate parameters (" +
                                    std::string(r.route) + ")");
  if (!r.usable())
    throw ConvergenceError(std::string(what) + ": no convergence (" + std::string(r.route) + ")",
                           r.value.real(), r.terms_used);
  return r;
}

} // namespace detail

inline double gauss_2f1(double a, double b, double c, double z)
{
  return detail::require_usable(evaluate_gauss_2f1(a, b, c, z), "2F1").value.real();
}

inline std::complex<double> gauss_2f1_continued(double a, double b, double c, double z,
                                                Branch branch = Branch::above)
{
  return detail::require_usable(evaluate_gauss_2f1_continued(a, b, c, z, branch), "2F1").value;
}

inline std::complex<double> appell_f1(double a, double b1, double b2, double c, double x, double y,
                                      Branch branch = Branch::above)
{
  return detail::require_usable(evaluate_appell_f1(a, b1, b2, c, x, y, branch), "Appell F1").value;
}

} // namespace capflow::special
