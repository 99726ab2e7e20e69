#include <gtest/gtest.h>

#include <cmath>

#include "rdwb/opnorm.hpp"

using namespace rdwb;

namespace {

RealFunction sphere1(const GroupModel& m) {
  RealFunction x(m);
  for (int l = 0; l < m.alphabet_size(); ++l) x.set(m.generator_element(static_cast<Letter>(l)), 1.0);
  return x;
}

}  // namespace

TEST(OpNorm, DeltaIsAnIsometry) {
  const auto F = GroupModel::free(2);
  RealFunction d(F);
  d.set(F.parse_element("abA"), 1.0);
  for (int R : {0, 2, 4}) EXPECT_NEAR(op_norm_lower(d, R), 1.0, 1e-7) << R;
}

TEST(OpNorm, NeverBelowTheL2Norm) {
  const auto Z2 = GroupModel::free_abelian(2);
  RealFunction x(Z2);
  x.set(Z2.parse_element("a"), 0.5);
  x.set(Z2.parse_element("bb"), 2.0);
  EXPECT_GE(op_norm_lower(x, 0), std::sqrt(4.25) - 1e-9);
}

TEST(OpNorm, LineConvergesToTwo) {
  const auto Z = GroupModel::free_abelian(1);
  // exact spectral norm of the path graph with R+1 .. vertices is below 2
  double prev = 0.0;
  for (int R : {5, 10, 20, 50}) {
    const double v = op_norm_lower(sphere1(Z), R);
    EXPECT_LE(v, 2.0 + 1e-9);
    EXPECT_GE(v, prev - 1e-7);
    prev = v;
  }
  EXPECT_GE(prev, 1.99);
}

TEST(OpNorm, FreeGroupIsMonotone) {
  const auto F = GroupModel::free(2);
  double prev = 0.0;
  for (int R = 1; R <= 6; ++R) {
    const double v = op_norm_lower(sphere1(F), R);
    EXPECT_GE(v, prev - 1e-7) << R;
    EXPECT_LE(v, 4.0 + 1e-9);
    prev = v;
  }
  EXPECT_GT(prev, 3.0);
}
