#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace capflow;
using capflow::test::rel_diff;

TEST(Fluid, RejectsNonPositiveParameters)
{
  EXPECT_THROW(PowerLawFluid(0.0, 1.0), DomainError);
  EXPECT_THROW(PowerLawFluid(-1.0, 1.0), DomainError);
  EXPECT_THROW(PowerLawFluid(1.0, 0.0), DomainError);
  EXPECT_THROW(PowerLawFluid(1.0, std::nan("")), DomainError);
  EXPECT_THROW(PowerLawFluid(INFINITY, 1.0), DomainError);
}

TEST(Fluid, ValidatedRangeIsFlaggedNotEnforced)
{
  EXPECT_TRUE(PowerLawFluid(1.0, 0.2).index_in_validated_range());
  EXPECT_TRUE(PowerLawFluid(1.0, 2.0).index_in_validated_range());
  EXPECT_FALSE(PowerLawFluid(1.0, 0.1).index_in_validated_range());
  EXPECT_FALSE(PowerLawFluid(1.0, 3.0).index_in_validated_range());
}

TEST(Fluid, ApparentViscosity)
{
  EXPECT_DOUBLE_EQ(apparent_viscosity(PowerLawFluid(1.0, 1.0), 37.2), 1.0);
  EXPECT_DOUBLE_EQ(apparent_viscosity(PowerLawFluid(2.0, 0.5), 4.0), 1.0);
  // 1.5 * 10^(-0.3)
  EXPECT_LT(rel_diff(apparent_viscosity(PowerLawFluid(1.5, 0.7), 10.0), 0.7517808504409084), 1e-14);
  EXPECT_THROW(apparent_viscosity(PowerLawFluid(1.0, 0.5), 0.0), DomainError);
  EXPECT_THROW(apparent_viscosity(PowerLawFluid(1.0, 0.5), -1.0), DomainError);
}

TEST(Fluid, ShearThinningAndThickening)
{
  const PowerLawFluid thin(1.0, 0.6);
  const PowerLawFluid thick(1.0, 1.4);
  EXPECT_GT(apparent_viscosity(thin, 1.0), apparent_viscosity(thin, 2.0));
  EXPECT_LT(apparent_viscosity(thick, 1.0), apparent_viscosity(thick, 2.0));
}

TEST(StraightTube, HagenPoiseuille)
{
  const PowerLawFluid water(1.0, 1.0);
  EXPECT_LT(rel_diff(straight_tube_pressure_drop(water, 1.0, 1.0, std::numbers::pi / 8), 1.0), 1e-14);
  EXPECT_LT(rel_diff(straight_tube_flow_rate(water, 1.0, 1.0, 1.0), std::numbers::pi / 8), 1e-14);
  EXPECT_EQ(straight_tube_pressure_drop(water, 1.0, 1.0, 0.0), 0.0);
  EXPECT_EQ(straight_tube_flow_rate(water, 1.0, 1.0, 0.0), 0.0);
}

TEST(StraightTube, ShearThinningReference)
{
  // 2 (5 / (0.5 pi))^0.5 * 2, frozen from a 40-digit evaluation
  const PowerLawFluid fluid(1.0, 0.5);
  const double p = straight_tube_pressure_drop(fluid, 1.0, 2.0, 1.0);
  EXPECT_LT(rel_diff(p, 5.046265044040320), 1e-14);
  EXPECT_LT(rel_diff(straight_tube_flow_rate(fluid, 1.0, 2.0, p), 1.0), 1e-13);
}

TEST(StraightTube, RoundTripProperty)
{
  capflow::test::Draw draw(17);
  for (int i = 0; i < 200; ++i) {
    const PowerLawFluid fluid(draw.log_uniform(0.1, 10.0), draw.index());
    const double r = draw.log_uniform(0.1, 10.0);
    const double l = draw.log_uniform(0.1, 10.0);
    const double q = draw.log_uniform(1e-6, 1e3);
    const double p = straight_tube_pressure_drop(fluid, r, l, q);
    EXPECT_LT(rel_diff(straight_tube_flow_rate(fluid, r, l, p), q), 1e-12);
  }
}
