#pragma once

// Adaptive Gauss-Kronrod (7/15) evaluation of the master integral
//
//   P = 2 C Q^n ((3n+1)/(pi n))^n * integral_{-L/2}^{L/2} dx / r(x)^(3n+1)
//
// The integrand only ever sees the tube through radius_from_coefficients, so
// the oracle shares no algebra with the closed forms it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "capflow/errors.hpp"
#include "capflow/fluid.hpp"
#include "capflow/geometry.hpp"

namespace capflow {

struct QuadratureResult
{
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

enum class Symmetry
{
  exploit_evenness, // integrate [0, L/2] and double
  full_interval,    // integrate [-L/2, L/2] directly
};

inline constexpr int quadrature_panel_cap = 10000;
inline constexpr double validation_rel_tol = 1e-10;
inline constexpr double interactive_rel_tol = 1e-8;

namespace detail {

struct Panel
{
  double lo;
  double hi;
  double value;
  double error;
};

struct WorseFirst
{
  bool operator()(const Panel& l, const Panel& r) const
  {
    if (l.error != r.error)
      return l.error < r.error;
    return l.lo > r.lo;
  }
};

template <class F>
Panel kronrod_panel(const F& f, double lo, double hi)
{
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = kronrod::abscissa();
  const auto& wk = kronrod::weights();
  const auto& wg = gauss::weights();

  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // abscissa()[0] is the centre; odd indices are Kronrod-only nodes, even
  // indices are shared with the 7-point Gauss rule.
  const double f0 = f(mid);
  double k = f0 * wk[0];
  double g = f0 * wg[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double pair = f(mid - half * x[i]) + f(mid + half * x[i]);
    k += pair * wk[i];
    if (i % 2 == 0)
      g += pair * wg[i / 2];
  }
  k *= half;
  g *= half;
  const double err =
    std::max(std::abs(k - g), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
  return {lo, hi, k, err};
}

} // namespace detail

// Worst-panel bisection until the summed error estimate is within
// rel_tol * |value| or max_panels is reached. Never throws for
// non-convergence; inspect `converged`.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double lo, double hi, double rel_tol,
                                    int max_panels = quadrature_panel_cap)
{
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::WorseFirst> queue;
  queue.push(detail::kronrod_panel(f, lo, hi));

  auto totals = [&queue] {
    // copy, sort by position, and sum in a fixed order
    std::vector<detail::Panel> panels;
    panels.reserve(queue.size());
    auto copy = queue;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.lo < r.lo; });
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double value = queue.top().value;
  double error = queue.top().error;
  int panels = 1;
  while (true) {
    if (error <= rel_tol * std::abs(value)) {
      auto [v, e] = totals();
      if (e <= rel_tol * std::abs(v))
        return {v, e, panels, true};
      value = v;
      error = e;
    }
    if (panels >= max_panels)
      break;
    const detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Panel left = detail::kronrod_panel(f, worst.lo, mid);
    const detail::Panel right = detail::kronrod_panel(f, mid, worst.hi);
    queue.push(left);
    queue.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    ++panels;
  }
  auto [v, e] = totals();
  return {v, e, panels, e <= rel_tol * std::abs(v)};
}

namespace detail {

inline void require_rel_tol(double rel_tol)
{
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2))
    throw DomainError("quadrature rel_tol must lie in [1e-14, 1e-2]");
}

} // namespace detail

// integral_{-L/2}^{L/2} r(x)^-exponent dx. Throws ConvergenceError (with the
// best estimate attached) when the panel cap is hit.
inline QuadratureResult integrate_inverse_radius_power(const TubeSpec& spec, double exponent,
                                                       double rel_tol = validation_rel_tol,
                                                       Symmetry symmetry = Symmetry::exploit_evenness)
{
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw DomainError("radius exponent must be positive");
  detail::require_rel_tol(rel_tol);

  const ProfileCoefficients coeffs = coefficients(spec);
  const TubeShape shape = spec.shape();
  auto integrand = [&](double x) {
    return std::pow(radius_from_coefficients(shape, coeffs, x), -exponent);
  };

  const double half = 0.5 * spec.length();
  QuadratureResult r;
  if (symmetry == Symmetry::exploit_evenness) {
    r = integrate_adaptive(integrand, 0.0, half, rel_tol);
    r.value *= 2.0;
    r.error_estimate *= 2.0;
  } else {
    r = integrate_adaptive(integrand, -half, half, rel_tol);
  }
  if (!r.converged)
    throw ConvergenceError("adaptive quadrature reached the panel cap", r.value, r.subdivisions);
  return r;
}

inline QuadratureResult pressure_drop_numeric(const PowerLawFluid& fluid, const TubeSpec& spec,
                                              double flow_rate, double rel_tol = validation_rel_tol,
                                              Symmetry symmetry = Symmetry::exploit_evenness)
{
  if (!(flow_rate >= 0.0) || !std::isfinite(flow_rate))
    throw DomainError("flow rate must be non-negative and finite");
  detail::require_rel_tol(rel_tol);
  if (flow_rate == 0.0)
    return {0.0, 0.0, 0, true};
  const double n = fluid.index();
  QuadratureResult r = integrate_inverse_radius_power(spec, 3.0 * n + 1.0, rel_tol, symmetry);
  const double scale = flow_prefactor(fluid) * std::pow(flow_rate, n);
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

} // namespace capflow
