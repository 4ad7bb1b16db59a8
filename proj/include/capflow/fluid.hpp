#pragma once

// Power-law (Ostwald-de Waele) rheology and the constant-radius tube solution.
//
//   mu = C * gamma_dot^(n-1)
//   P  = 2 C Q^n (3n+1)^n L / (pi^n n^n r^(3n+1))

#include <cmath>
#include <numbers>
#include <string>

#include "capflow/errors.hpp"

namespace capflow {

class PowerLawFluid
{
public:
  // Indices inside this range are covered by the accuracy tests of the
  // special-function kernels; outside it results are still computed.
  static constexpr double validated_index_min = 0.2;
  static constexpr double validated_index_max = 2.0;

  PowerLawFluid(double consistency, double index) : consistency_(consistency), index_(index)
  {
    if (!(consistency > 0.0) || !std::isfinite(consistency))
      throw DomainError("power-law consistency must be positive and finite, got " +
                        std::to_string(consistency));
    if (!(index > 0.0) || !std::isfinite(index))
      throw DomainError("power-law index must be positive and finite, got " +
                        std::to_string(index));
  }

  double consistency() const noexcept { return consistency_; }
  double index() const noexcept { return index_; }

  bool index_in_validated_range() const noexcept
  {
    return index_ >= validated_index_min && index_ <= validated_index_max;
  }

private:
  double consistency_;
  double index_;
};

inline double apparent_viscosity(const PowerLawFluid& fluid, double strain_rate)
{
  if (!(strain_rate > 0.0))
    throw DomainError("strain rate must be positive; the power-law model is undefined at zero shear");
  return fluid.consistency() * std::pow(strain_rate, fluid.index() - 1.0);
}

// 2 C ((3n+1) / (pi n))^n, the factor in front of Q^n * integral(dx / r^(3n+1)).
inline double flow_prefactor(const PowerLawFluid& fluid)
{
  const double n = fluid.index();
  return 2.0 * fluid.consistency() * std::pow((3.0 * n + 1.0) / (std::numbers::pi * n), n);
}

namespace detail {

inline void require_tube(double radius, double length)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("tube radius must be positive and finite");
  if (!(length > 0.0) || !std::isfinite(length))
    throw DomainError("tube length must be positive and finite");
}

} // namespace detail

inline double straight_tube_pressure_drop(const PowerLawFluid& fluid, double radius,
                                          double length, double flow_rate)
{
  detail::require_tube(radius, length);
  if (!(flow_rate >= 0.0) || !std::isfinite(flow_rate))
    throw DomainError("flow rate must be non-negative and finite");
  if (flow_rate == 0.0)
    return 0.0;
  const double n = fluid.index();
  return flow_prefactor(fluid) * std::pow(flow_rate, n) * length / std::pow(radius, 3.0 * n + 1.0);
}

inline double straight_tube_flow_rate(const PowerLawFluid& fluid, double radius, double length,
                                      double pressure_drop)
{
  detail::require_tube(radius, length);
  if (!(pressure_drop >= 0.0) || !std::isfinite(pressure_drop))
    throw DomainError("pressure drop must be non-negative and finite");
  if (pressure_drop == 0.0)
    return 0.0;
  const double n = fluid.index();
  const double conductance = flow_prefactor(fluid) * length / std::pow(radius, 3.0 * n + 1.0);
  return std::pow(pressure_drop / conductance, 1.0 / n);
}

} // namespace capflow
