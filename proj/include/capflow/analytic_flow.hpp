#pragma once

// Closed-form pressure drop / flow rate relations P = K Q^n for the five tube
// profiles. K = flow_prefactor(fluid) * integral(dx / r^(3n+1)), where the
// integral is evaluated in closed form:
//
//   conic        L (r_min^-3n - r_max^-3n) / (3n (r_max - r_min))
//   parabolic    L r_min^-(3n+1) 2F1(1/2, 3n+1; 3/2; 1 - r_max/r_min)
//   hyperbolic   L r_min^-(3n+1) 2F1(1/2, (3n+1)/2; 3/2; 1 - r_max^2/r_min^2)
//   cosh         L Im 2F1(1/2, -3n/2; 1 - 3n/2; r_max^2/r_min^2)
//                  / (3n r_min r_max^3n arccosh(r_max/r_min))
//   sinusoidal   L Im F1(-3n; 1/2, 1/2; 1 - 3n; 1, r_max/r_min)
//                  / (3 pi n r_max^3n sqrt(r_max r_min))
//
// The Im() forms live on the cut of the hypergeometric function; both cut
// limits are evaluated and the one giving a positive integral is kept (the
// other is its exact negative). Degenerate parameters fall back to the
// quadrature oracle.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "capflow/errors.hpp"
#include "capflow/fluid.hpp"
#include "capflow/geometry.hpp"
#include "capflow/quadrature.hpp"
#include "capflow/special/gamma.hpp"
#include "capflow/special/hypergeometric.hpp"

namespace capflow {

using special::Branch;

enum class Method
{
  analytic,
  analytic_offset,     // closed form at n +- eps with Richardson extrapolation
  quadrature_fallback,
};

inline constexpr std::string_view to_string(Method method)
{
  switch (method) {
  case Method::analytic: return "analytic";
  case Method::analytic_offset: return "analytic_offset";
  case Method::quadrature_fallback: return "quadrature_fallback";
  }
  return "unknown";
}

enum class DegeneratePolicy
{
  quadrature,
  epsilon_offset,
};

struct SolveOptions
{
  double fallback_rel_tol = interactive_rel_tol;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::quadrature;
  // Co-evaluate the quadrature oracle and attach the relative difference.
  bool validate = false;
  double validation_rel_tol = capflow::validation_rel_tol;
};

struct Diagnostics
{
  std::string note;
  std::optional<special::EvaluationReport> kernel;
  int quadrature_subdivisions = 0;
  bool index_outside_validated_range = false;
};

struct Validation
{
  double oracle = 0.0;
  double relative_error = 0.0;
  double oracle_error_estimate = 0.0;
  Symmetry oracle_symmetry = Symmetry::exploit_evenness;
  double oracle_rel_tol = 0.0;
};

struct Conductance
{
  double value = 0.0; // Pa (m^3/s)^-n
  Method method = Method::analytic;
  std::optional<Branch> branch;
  Diagnostics diagnostics;
};

struct FlowResult
{
  double pressure_drop = 0.0;
  double flow_rate = 0.0;
  double conductance = 0.0;
  Method method = Method::analytic;
  std::optional<Branch> branch_used;
  Diagnostics diagnostics;
  std::optional<Validation> validation;
};

struct ClosedFormIntegral
{
  std::optional<double> value; // empty when the special-function kernel refused
  std::optional<Branch> branch;
  std::optional<special::EvaluationReport> report;
};

namespace detail {

inline ClosedFormIntegral from_cut(double scale,
                                   special::EvaluationReport above,
                                   special::EvaluationReport below)
{
  ClosedFormIntegral out;
  out.report = above;
  if (!above.usable() || !below.usable())
    return out;
  const double up = scale * above.value.imag();
  const double down = scale * below.value.imag();
  if (down > 0.0 && !(up > 0.0)) {
    out.value = down;
    out.branch = Branch::below;
    out.report = below;
  } else if (up > 0.0 && !(down > 0.0)) {
    out.value = up;
    out.branch = Branch::above;
  } else {
    out.report->converged = false;
  }
  return out;
}

} // namespace detail

// integral_{-L/2}^{L/2} dx / r(x)^(3n+1) from the closed forms.
inline ClosedFormIntegral closed_form_integral(const TubeSpec& spec, double index)
{
  const double n = index;
  const double m = 3.0 * n + 1.0;
  const double r_min = spec.r_min();
  const double r_max = spec.r_max();
  const double len = spec.length();

  ClosedFormIntegral out;
  if (spec.is_straight()) {
    out.value = len / std::pow(r_min, m);
    return out;
  }

  const double gap = r_max - r_min;
  switch (spec.shape()) {
  case TubeShape::conic: {
    // r_min^-3n - r_max^-3n = r_min^-3n (1 - (r_max/r_min)^-3n), kept accurate near r_max = r_min
    const double drop = -std::expm1(-3.0 * n * std::log1p(gap / r_min));
    out.value = len * std::pow(r_min, -3.0 * n) * drop / (3.0 * n * gap);
    return out;
  }
  case TubeShape::parabolic: {
    auto r = special::evaluate_gauss_2f1(0.5, m, 1.5, -gap / r_min);
    out.report = r;
    if (r.usable())
      out.value = len * std::pow(r_min, -m) * r.value.real();
    return out;
  }
  case TubeShape::hyperbolic: {
    auto r = special::evaluate_gauss_2f1(0.5, 0.5 * m, 1.5, -gap * (r_max + r_min) / (r_min * r_min));
    out.report = r;
    if (r.usable())
      out.value = len * std::pow(r_min, -m) * r.value.real();
    return out;
  }
  case TubeShape::hyperbolic_cosine: {
    const double ratio = r_max / r_min;
    const double z = ratio * ratio;
    const double a = 0.5, b = -1.5 * n, c = 1.0 - 1.5 * n;
    const double scale =
      len / (3.0 * n * r_min * std::pow(r_max, 3.0 * n) * special::arccosh(ratio));
    return detail::from_cut(scale,
                            special::evaluate_gauss_2f1_continued(a, b, c, z, Branch::above),
                            special::evaluate_gauss_2f1_continued(a, b, c, z, Branch::below));
  }
  case TubeShape::sinusoidal: {
    const double ratio = r_max / r_min;
    const double a = -3.0 * n, c = 1.0 - 3.0 * n;
    const double scale =
      len / (3.0 * std::numbers::pi * n * std::pow(r_max, 3.0 * n) * std::sqrt(r_max * r_min));
    return detail::from_cut(
      scale, special::evaluate_appell_f1(a, 0.5, 0.5, c, 1.0, ratio, Branch::above),
      special::evaluate_appell_f1(a, 0.5, 0.5, c, 1.0, ratio, Branch::below));
  }
  }
  return out;
}

namespace detail {

inline constexpr double index_offset = 1e-5;

// Closed form at n +- eps and n +- eps/2, symmetric averages combined by one
// Richardson step. Empty if any of the four evaluations is refused.
inline std::optional<double> offset_integral(const TubeSpec& spec, double n)
{
  auto average = [&](double eps) -> std::optional<double> {
    auto hi = closed_form_integral(spec, n + eps);
    auto lo = closed_form_integral(spec, n - eps);
    if (!hi.value || !lo.value)
      return std::nullopt;
    return 0.5 * (*hi.value + *lo.value);
  };
  auto wide = average(index_offset);
  auto narrow = average(0.5 * index_offset);
  if (!wide || !narrow)
    return std::nullopt;
  return (4.0 * *narrow - *wide) / 3.0;
}

inline QuadratureResult fallback_quadrature(const TubeSpec& spec, double n, double rel_tol)
{
  try {
    return integrate_inverse_radius_power(spec, 3.0 * n + 1.0, rel_tol);
  } catch (const ConvergenceError& e) {
    throw EvaluationError(std::string("closed form refused and quadrature fallback failed: ") +
                          e.what());
  }
}

} // namespace detail

inline Conductance conductance_coefficient(const PowerLawFluid& fluid, const TubeSpec& spec,
                                           const SolveOptions& options = {})
{
  const double n = fluid.index();
  const double prefactor = flow_prefactor(fluid);

  Conductance k;
  k.diagnostics.index_outside_validated_range = !fluid.index_in_validated_range();
  if (spec.is_straight())
    k.diagnostics.note = "degenerate: straight tube";

  ClosedFormIntegral closed = closed_form_integral(spec, n);
  k.diagnostics.kernel = closed.report;
  if (closed.value) {
    k.value = prefactor * *closed.value;
    k.method = Method::analytic;
    k.branch = closed.branch;
    return k;
  }

  const bool degenerate = closed.report && closed.report->degenerate_parameters;
  k.diagnostics.note = degenerate ? "degenerate special-function parameters"
                                  : "special-function series did not converge";
  if (closed.report)
    k.diagnostics.note += std::string(" (") + std::string(closed.report->route) + ")";

  if (options.degenerate_policy == DegeneratePolicy::epsilon_offset) {
    if (auto offset = detail::offset_integral(spec, n)) {
      QuadratureResult check = detail::fallback_quadrature(spec, n, options.fallback_rel_tol);
      k.diagnostics.quadrature_subdivisions = check.subdivisions;
      if (std::abs(*offset - check.value) <= 1e-6 * check.value) {
        k.value = prefactor * *offset;
        k.method = Method::analytic_offset;
        k.diagnostics.note += "; index offset evaluation agrees with quadrature";
        return k;
      }
      k.value = prefactor * check.value;
      k.method = Method::quadrature_fallback;
      k.diagnostics.note += "; index offset evaluation disagreed with quadrature";
      return k;
    }
  }

  QuadratureResult q = detail::fallback_quadrature(spec, n, options.fallback_rel_tol);
  k.value = prefactor * q.value;
  k.method = Method::quadrature_fallback;
  k.diagnostics.quadrature_subdivisions = q.subdivisions;
  return k;
}

namespace detail {

// Fallback results are checked against a differently configured oracle: the
// full interval without the evenness shortcut, at a tighter tolerance.
inline Validation make_validation(Method method, const PowerLawFluid& fluid, const TubeSpec& spec,
                                  const SolveOptions& options)
{
  Validation v;
  v.oracle_symmetry = method == Method::quadrature_fallback ? Symmetry::full_interval
                                                           : Symmetry::exploit_evenness;
  v.oracle_rel_tol = method == Method::quadrature_fallback
                       ? std::min(options.validation_rel_tol, 1e-12)
                       : options.validation_rel_tol;
  QuadratureResult q = pressure_drop_numeric(fluid, spec, 1.0, v.oracle_rel_tol, v.oracle_symmetry);
  v.oracle = q.value; // conductance; callers rescale
  v.oracle_error_estimate = q.error_estimate;
  return v;
}

inline double relative_difference(double value, double reference)
{
  if (reference == 0.0)
    return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(value - reference) / std::abs(reference);
}

} // namespace detail

inline FlowResult pressure_drop(const PowerLawFluid& fluid, const TubeSpec& spec, double flow_rate,
                                const SolveOptions& options = {})
{
  if (!(flow_rate >= 0.0) || !std::isfinite(flow_rate))
    throw DomainError("flow rate must be non-negative and finite");
  const double n = fluid.index();
  Conductance k = conductance_coefficient(fluid, spec, options);

  FlowResult r;
  r.flow_rate = flow_rate;
  r.conductance = k.value;
  r.pressure_drop = flow_rate == 0.0 ? 0.0 : k.value * std::pow(flow_rate, n);
  r.method = k.method;
  r.branch_used = k.branch;
  r.diagnostics = std::move(k.diagnostics);
  if (options.validate) {
    Validation v = detail::make_validation(r.method, fluid, spec, options);
    const double scale = flow_rate == 0.0 ? 0.0 : std::pow(flow_rate, n);
    v.oracle *= scale;
    v.oracle_error_estimate *= scale;
    v.relative_error = detail::relative_difference(r.pressure_drop, v.oracle);
    r.validation = v;
  }
  return r;
}

inline FlowResult flow_rate(const PowerLawFluid& fluid, const TubeSpec& spec, double pressure_drop,
                            const SolveOptions& options = {})
{
  if (!(pressure_drop >= 0.0) || !std::isfinite(pressure_drop))
    throw DomainError("pressure drop must be non-negative and finite");
  const double inv_n = 1.0 / fluid.index();
  Conductance k = conductance_coefficient(fluid, spec, options);

  FlowResult r;
  r.pressure_drop = pressure_drop;
  r.conductance = k.value;
  r.flow_rate = pressure_drop == 0.0 ? 0.0 : std::pow(pressure_drop / k.value, inv_n);
  r.method = k.method;
  r.branch_used = k.branch;
  r.diagnostics = std::move(k.diagnostics);
  if (options.validate) {
    Validation v = detail::make_validation(r.method, fluid, spec, options);
    const double oracle_conductance = v.oracle;
    v.oracle = pressure_drop == 0.0 ? 0.0 : std::pow(pressure_drop / oracle_conductance, inv_n);
    // dQ/Q = (1/n) dK/K
    v.oracle_error_estimate = v.oracle * inv_n * v.oracle_error_estimate / oracle_conductance;
    v.relative_error = detail::relative_difference(r.flow_rate, v.oracle);
    r.validation = v;
  }
  return r;
}

} // namespace capflow
