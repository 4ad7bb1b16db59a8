#pragma once

// Converging-diverging axisymmetric tube profiles. Frame: x in [-L/2, L/2],
// throat (r = r_min) at x = 0, r = r_max at both ends.
//
//   conic               r = a + b|x|          a = r_min, b = 2(r_max - r_min)/L
//   parabolic           r = a + b x^2         a = r_min, b = (2/L)^2 (r_max - r_min)
//   hyperbolic          r = sqrt(a + b x^2)   a = r_min^2, b = (2/L)^2 (r_max^2 - r_min^2)
//   hyperbolic cosine   r = a cosh(b x)       a = r_min, b = (2/L) arccosh(r_max/r_min)
//   sinusoidal          r = a - b cos(k x)    a = (r_max + r_min)/2, b = (r_max - r_min)/2, k = 2 pi/L

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "capflow/errors.hpp"
#include "capflow/special/gamma.hpp"

namespace capflow {

enum class TubeShape
{
  conic,
  parabolic,
  hyperbolic,
  hyperbolic_cosine,
  sinusoidal,
};

inline constexpr std::array<TubeShape, 5> all_tube_shapes{
  TubeShape::conic, TubeShape::parabolic, TubeShape::hyperbolic, TubeShape::hyperbolic_cosine,
  TubeShape::sinusoidal};

inline constexpr std::string_view to_string(TubeShape shape)
{
  switch (shape) {
  case TubeShape::conic: return "conic";
  case TubeShape::parabolic: return "parabolic";
  case TubeShape::hyperbolic: return "hyperbolic";
  case TubeShape::hyperbolic_cosine: return "cosh";
  case TubeShape::sinusoidal: return "sinusoidal";
  }
  return "unknown";
}

inline std::optional<TubeShape> parse_tube_shape(std::string_view name)
{
  for (auto shape : all_tube_shapes)
    if (name == to_string(shape))
      return shape;
  if (name == "hyperbolic-cosine" || name == "hyperbolic_cosine")
    return TubeShape::hyperbolic_cosine;
  if (name == "sinusoid")
    return TubeShape::sinusoidal;
  return std::nullopt;
}

class TubeSpec
{
public:
  TubeSpec(TubeShape shape, double r_min, double r_max, double length)
    : shape_(shape), r_min_(r_min), r_max_(r_max), length_(length)
  {
    if (!(r_min > 0.0) || !std::isfinite(r_min))
      throw DomainError("r_min must be positive and finite");
    if (!(r_max >= r_min) || !std::isfinite(r_max))
      throw DomainError("r_max must be finite and not smaller than r_min");
    if (!(length > 0.0) || !std::isfinite(length))
      throw DomainError("tube length must be positive and finite");
  }

  TubeShape shape() const noexcept { return shape_; }
  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  double length() const noexcept { return length_; }

  // r_min == r_max: every profile collapses to a straight tube.
  bool is_straight() const noexcept { return r_min_ == r_max_; }

  TubeSpec scaled(double factor) const
  {
    return TubeSpec(shape_, factor * r_min_, factor * r_max_, factor * length_);
  }

private:
  TubeShape shape_;
  double r_min_;
  double r_max_;
  double length_;
};

struct ProfileCoefficients
{
  double a = 0.0;
  double b = 0.0;
  std::optional<double> k; // sinusoidal only
  bool straight = false;
};

inline ProfileCoefficients coefficients(const TubeSpec& spec)
{
  const double r_min = spec.r_min();
  const double r_max = spec.r_max();
  const double half_inv = 2.0 / spec.length();

  ProfileCoefficients c;
  c.straight = spec.is_straight();
  switch (spec.shape()) {
  case TubeShape::conic:
    c.a = r_min;
    c.b = half_inv * (r_max - r_min);
    break;
  case TubeShape::parabolic:
    c.a = r_min;
    c.b = half_inv * half_inv * (r_max - r_min);
    break;
  case TubeShape::hyperbolic:
    c.a = r_min * r_min;
    c.b = half_inv * half_inv * (r_max - r_min) * (r_max + r_min);
    break;
  case TubeShape::hyperbolic_cosine:
    c.a = r_min;
    c.b = half_inv * special::arccosh(r_max / r_min);
    break;
  case TubeShape::sinusoidal:
    c.a = 0.5 * (r_max + r_min);
    c.b = 0.5 * (r_max - r_min);
    c.k = std::numbers::pi * half_inv;
    break;
  }
  return c;
}

// Profile value using precomputed coefficients; no domain check on x.
inline double radius_from_coefficients(TubeShape shape, const ProfileCoefficients& c, double x)
{
  switch (shape) {
  case TubeShape::conic: return c.a + c.b * std::abs(x);
  case TubeShape::parabolic: return c.a + c.b * x * x;
  case TubeShape::hyperbolic: return std::sqrt(c.a + c.b * x * x);
  case TubeShape::hyperbolic_cosine: return c.a * std::cosh(c.b * x);
  case TubeShape::sinusoidal: return c.a - c.b * std::cos(*c.k * x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline double radius_at(const TubeSpec& spec, double x)
{
  const double half = 0.5 * spec.length();
  // a few ulps of slack so sample grids that land on +-L/2 are accepted
  if (!(std::abs(x) <= half * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())))
    throw DomainError("axial coordinate outside [-L/2, L/2]");
  return radius_from_coefficients(spec.shape(), coefficients(spec), x);
}

} // namespace capflow
