#pragma once

#include <cmath>
#include <limits>

#include "capflow/errors.hpp"

namespace capflow::special {

// Parameters closer than this to an integer are treated as that integer when
// deciding whether a series or connection formula is degenerate.
inline constexpr double integer_tolerance = 1e-12;

inline double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

inline bool is_nonpositive_integer(double x)
{
  return std::round(x) <= 0.0 && distance_to_integer(x) < integer_tolerance;
}

inline double gamma(double x)
{
  if (is_nonpositive_integer(x))
    throw DegenerateParametersError("gamma function pole at non-positive integer");
  return std::tgamma(x);
}

// 1/Gamma(x); entire, exactly zero at the poles of Gamma.
inline double rgamma(double x)
{
  if (is_nonpositive_integer(x))
    return 0.0;
  return 1.0 / std::tgamma(x);
}

inline double arccosh(double t)
{
  if (!(t >= 1.0))
    throw DomainError("arccosh requires an argument >= 1");
  return std::acosh(t);
}

} // namespace capflow::special
