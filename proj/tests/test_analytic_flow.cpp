#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace capflow;
using capflow::test::rel_diff;

namespace {

double analytic_p(TubeShape shape, double n, double r_min, double r_max, double length, double q,
                  double c = 1.0)
{
  return pressure_drop(PowerLawFluid(c, n), TubeSpec(shape, r_min, r_max, length), q).pressure_drop;
}

} // namespace

TEST(AnalyticFlow, ConicNewtonianReference)
{
  // 56 / (1.5 pi)
  const auto r = pressure_drop(PowerLawFluid(1, 1), TubeSpec(TubeShape::conic, 0.5, 1, 1), 1.0);
  EXPECT_EQ(r.method, Method::analytic);
  EXPECT_LT(rel_diff(r.pressure_drop, 112.0 / (3 * std::numbers::pi)), 1e-12);
  const auto back = flow_rate(PowerLawFluid(1, 1), TubeSpec(TubeShape::conic, 0.5, 1, 1), r.pressure_drop);
  EXPECT_LT(rel_diff(back.flow_rate, 1.0), 1e-12);
}

TEST(AnalyticFlow, HyperbolicArctanReference)
{
  const TubeSpec spec(TubeShape::hyperbolic, 1, 2, 1);
  const auto integral = closed_form_integral(spec, 1.0 / 3.0);
  ASSERT_TRUE(integral.value.has_value());
  EXPECT_LT(rel_diff(*integral.value, 0.6045997880780726), 1e-13);
  EXPECT_LT(rel_diff(analytic_p(TubeShape::hyperbolic, 1.0 / 3.0, 1, 2, 1, 1), 1.500255101327622), 1e-12);
}

TEST(AnalyticFlow, CoshReference)
{
  const auto r = pressure_drop(PowerLawFluid(1, 1), TubeSpec(TubeShape::hyperbolic_cosine, 1, 2, 1), 1.0);
  EXPECT_EQ(r.method, Method::analytic);
  ASSERT_TRUE(r.branch_used.has_value());
  EXPECT_EQ(*r.branch_used, Branch::below);
  EXPECT_LT(rel_diff(r.pressure_drop, 1.255914627284246), 1e-12);
}

TEST(AnalyticFlow, SinusoidNewtonianFallsBack)
{
  // 3n = 3 is in the degenerate family; the integral itself is
  // 2F1(2, 5/2; 1; (b/a)^2) / a^4 with a = 1.5, b = 0.5.
  const TubeSpec spec(TubeShape::sinusoidal, 1, 2, 1);
  const auto k = conductance_coefficient(PowerLawFluid(1, 1), spec);
  EXPECT_EQ(k.method, Method::quadrature_fallback);
  EXPECT_NE(k.diagnostics.note.find("degenerate"), std::string::npos);
  const double integral = k.value / flow_prefactor(PowerLawFluid(1, 1));
  EXPECT_LT(rel_diff(integral, 0.348029118865254), 1e-8);
}

TEST(AnalyticFlow, StraightTubeNote)
{
  for (auto shape : all_tube_shapes) {
    const auto r = pressure_drop(PowerLawFluid(1, 1), TubeSpec(shape, 1, 1, 1), std::numbers::pi / 8);
    EXPECT_EQ(r.method, Method::analytic);
    EXPECT_EQ(r.diagnostics.note, "degenerate: straight tube");
    EXPECT_LT(rel_diff(r.pressure_drop, 1.0), 1e-14);
  }
}

TEST(AnalyticFlow, ZeroInputs)
{
  const PowerLawFluid fluid(2, 0.6);
  const TubeSpec spec(TubeShape::parabolic, 1, 3, 2);
  EXPECT_EQ(pressure_drop(fluid, spec, 0.0).pressure_drop, 0.0);
  EXPECT_EQ(flow_rate(fluid, spec, 0.0).flow_rate, 0.0);
  EXPECT_THROW(pressure_drop(fluid, spec, -1.0), DomainError);
  EXPECT_THROW(flow_rate(fluid, spec, NAN), DomainError);
}

TEST(AnalyticFlow, DegenerateIndicesFallBack)
{
  for (double n : {2.0 / 3.0, 4.0 / 3.0, 2.0}) {
    const auto k = conductance_coefficient(PowerLawFluid(1, n), TubeSpec(TubeShape::hyperbolic_cosine, 1, 3, 1));
    EXPECT_EQ(k.method, Method::quadrature_fallback) << n;
  }
  for (double n : {0.5, 1.0, 1.5, 2.0, 1.0 / 3.0, 5.0 / 6.0}) {
    const auto k = conductance_coefficient(PowerLawFluid(1, n), TubeSpec(TubeShape::sinusoidal, 1, 3, 1));
    EXPECT_EQ(k.method, Method::quadrature_fallback) << n;
  }
  for (double n : {0.6, 0.8, 1.2})
    for (auto shape : all_tube_shapes)
      EXPECT_EQ(conductance_coefficient(PowerLawFluid(1, n), TubeSpec(shape, 1, 3, 1)).method, Method::analytic)
        << to_string(shape) << " " << n;
}

TEST(AnalyticFlow, EpsilonOffsetPolicy)
{
  SolveOptions options;
  options.degenerate_policy = DegeneratePolicy::epsilon_offset;
  for (auto [shape, n] : {std::pair{TubeShape::hyperbolic_cosine, 2.0 / 3.0},
                          std::pair{TubeShape::sinusoidal, 1.0}, std::pair{TubeShape::sinusoidal, 0.5}}) {
    const TubeSpec spec(shape, 1, 2.5, 1.5);
    const PowerLawFluid fluid(1, n);
    const auto offset = conductance_coefficient(fluid, spec, options);
    EXPECT_EQ(offset.method, Method::analytic_offset) << to_string(shape) << " " << n;
    const double oracle = pressure_drop_numeric(fluid, spec, 1.0, 1e-13).value;
    EXPECT_LT(rel_diff(offset.value, oracle), 1e-6);
  }
}

TEST(AnalyticFlow, ValidationAttachesOracle)
{
  SolveOptions options;
  options.validate = true;
  const auto r = pressure_drop(PowerLawFluid(1, 0.7), TubeSpec(TubeShape::parabolic, 1, 4, 3), 2.5, options);
  ASSERT_TRUE(r.validation.has_value());
  EXPECT_LT(r.validation->relative_error, 1e-9);
  EXPECT_EQ(r.validation->oracle_symmetry, Symmetry::exploit_evenness);

  const auto fb = pressure_drop(PowerLawFluid(1, 1), TubeSpec(TubeShape::sinusoidal, 1, 4, 3), 2.5, options);
  ASSERT_TRUE(fb.validation.has_value());
  EXPECT_EQ(fb.validation->oracle_symmetry, Symmetry::full_interval);
  EXPECT_LE(fb.validation->oracle_rel_tol, 1e-12);
  EXPECT_LT(fb.validation->relative_error, 1e-8);

  const auto inv = flow_rate(PowerLawFluid(1, 0.7), TubeSpec(TubeShape::parabolic, 1, 4, 3), r.pressure_drop, options);
  ASSERT_TRUE(inv.validation.has_value());
  EXPECT_LT(rel_diff(inv.validation->oracle, 2.5), 1e-9);
}

TEST(AnalyticFlow, AgreesWithOracleProperty)
{
  capflow::test::Draw draw(67);
  for (int i = 0; i < 300; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(draw.log_uniform(0.1, 10), draw.index());
    const auto k = conductance_coefficient(fluid, spec);
    const double oracle = pressure_drop_numeric(fluid, spec, 1.0, 1e-12).value;
    const double tol = k.method == Method::analytic ? 1e-9 : 1e-7;
    EXPECT_LT(rel_diff(k.value, oracle), tol) << to_string(spec.shape()) << " n=" << fluid.index();
  }
}

TEST(AnalyticFlow, RoundTripProperty)
{
  capflow::test::Draw draw(71);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(draw.log_uniform(0.1, 10), draw.index());
    const double q = draw.log_uniform(1e-6, 1e2);
    const double p = pressure_drop(fluid, spec, q).pressure_drop;
    EXPECT_LT(rel_diff(flow_rate(fluid, spec, p).flow_rate, q), 1e-12);
  }
}

TEST(AnalyticFlow, HomogeneityProperty)
{
  capflow::test::Draw draw(73);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(1, draw.index());
    const double q = draw.log_uniform(1e-4, 10);
    const double alpha = draw.log_uniform(0.01, 100);
    const double p = pressure_drop(fluid, spec, q).pressure_drop;
    const double pa = pressure_drop(fluid, spec, alpha * q).pressure_drop;
    EXPECT_LT(rel_diff(pa, std::pow(alpha, fluid.index()) * p), 1e-12);
  }
}

TEST(AnalyticFlow, LinearInConsistencyAndLengthProperty)
{
  capflow::test::Draw draw(79);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const double n = draw.index();
    const double s = draw.log_uniform(0.1, 10);
    const double base = conductance_coefficient(PowerLawFluid(1, n), spec).value;
    const double thick = conductance_coefficient(PowerLawFluid(s, n), spec).value;
    const double longer =
      conductance_coefficient(PowerLawFluid(1, n), TubeSpec(spec.shape(), spec.r_min(), spec.r_max(), s * spec.length())).value;
    EXPECT_LT(rel_diff(thick, s * base), 1e-12);
    EXPECT_LT(rel_diff(longer, s * base), 1e-10);
  }
}

TEST(AnalyticFlow, GeometricScalingProperty)
{
  // scaling every length by s multiplies K by s^(-3n)
  capflow::test::Draw draw(83);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(1, draw.index());
    const double s = draw.log_uniform(0.1, 10);
    const double k = conductance_coefficient(fluid, spec).value;
    const double ks = conductance_coefficient(fluid, spec.scaled(s)).value;
    EXPECT_LT(rel_diff(ks, std::pow(s, -3 * fluid.index()) * k), 1e-10);
  }
}

TEST(AnalyticFlow, SandwichProperty)
{
  capflow::test::Draw draw(89);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(1, draw.index());
    const double q = draw.log_uniform(1e-3, 10);
    const double p = pressure_drop(fluid, spec, q).pressure_drop;
    EXPECT_LT(p, straight_tube_pressure_drop(fluid, spec.r_min(), spec.length(), q));
    EXPECT_GT(p, straight_tube_pressure_drop(fluid, spec.r_max(), spec.length(), q));
  }
}

TEST(AnalyticFlow, RadiusMonotonicityProperty)
{
  capflow::test::Draw draw(97);
  for (int i = 0; i < 200; ++i) {
    const TubeSpec spec = draw.tube();
    const PowerLawFluid fluid(1, draw.index());
    const double k = conductance_coefficient(fluid, spec).value;
    const TubeSpec wider_end(spec.shape(), spec.r_min(), 1.1 * spec.r_max(), spec.length());
    const TubeSpec wider_throat(spec.shape(), 0.5 * (spec.r_min() + spec.r_max()), spec.r_max(), spec.length());
    EXPECT_LT(conductance_coefficient(fluid, wider_end).value, k);
    EXPECT_LT(conductance_coefficient(fluid, wider_throat).value, k);
  }
}

TEST(AnalyticFlow, NearlyStraightTubeLimit)
{
  for (auto shape : all_tube_shapes)
    for (double n : {0.5, 1.0, 1.5}) {
      const PowerLawFluid fluid(1, n);
      const auto r = pressure_drop(fluid, TubeSpec(shape, 1, 1 + 1e-6, 1), 1.0);
      EXPECT_LT(rel_diff(r.pressure_drop, straight_tube_pressure_drop(fluid, 1, 1, 1)), 1e-4)
        << to_string(shape) << " " << n;
    }
}

TEST(AnalyticFlow, NewtonianConicMatchesElementaryForm)
{
  // n = 1: P = (8 C Q / pi) * L (a^-3 - R^-3) / (3 (R - a))
  capflow::test::Draw draw(101);
  for (int i = 0; i < 100; ++i) {
    const double r_min = draw.log_uniform(0.1, 5);
    const double r_max = r_min * draw.uniform(1.01, 10);
    const double length = draw.log_uniform(0.1, 10);
    const double expected =
      8 / std::numbers::pi * length * (std::pow(r_min, -3) - std::pow(r_max, -3)) / (3 * (r_max - r_min));
    EXPECT_LT(rel_diff(analytic_p(TubeShape::conic, 1, r_min, r_max, length, 1), expected), 1e-12);
  }
}

TEST(AnalyticFlow, OutsideValidatedRangeIsFlagged)
{
  const auto k = conductance_coefficient(PowerLawFluid(1, 2.7), TubeSpec(TubeShape::parabolic, 1, 2, 1));
  EXPECT_TRUE(k.diagnostics.index_outside_validated_range);
  EXPECT_FALSE(conductance_coefficient(PowerLawFluid(1, 0.7), TubeSpec(TubeShape::parabolic, 1, 2, 1))
                 .diagnostics.index_outside_validated_range);
}
