#include <gtest/gtest.h>

#include "rdwb/envelope.hpp"
#include "rdwb/polynomial.hpp"

using namespace rdwb;

TEST(AssembleP, Examples) {
  const PolynomialBound r_plus_1{{1.0, 1.0}};
  const auto P = assemble_P({r_plus_1}, 1);
  EXPECT_DOUBLE_EQ(P(2), 26.0);
  EXPECT_EQ(P.degree(), 2);
  EXPECT_EQ(P.role, PolynomialRole::assembled);
  const auto three = assemble_P({PolynomialBound::constant(1), PolynomialBound::constant(1)}, 4);
  for (double r : {0.0, 1.0, 7.0}) EXPECT_DOUBLE_EQ(three(r), 3.0);
  const auto one = assemble_P({}, 2);
  EXPECT_DOUBLE_EQ(one(5), 1.0);
}

TEST(Polynomial, Arithmetic) {
  const PolynomialBound p{{1.0, 2.0}};  // 1 + 2r
  const PolynomialBound q{{0.0, 0.0, 1.0}};
  EXPECT_DOUBLE_EQ((p * q)(3), 7.0 * 9.0);
  EXPECT_DOUBLE_EQ((p + q)(3), 16.0);
  EXPECT_DOUBLE_EQ(q.shifted(2)(1), 9.0);
  EXPECT_EQ((p * q).degree(), 3);
  const PolynomialBound zero{{0.0, 0.0}};
  EXPECT_EQ(zero.degree(), 0);
}

TEST(Envelope, LeastSquaresDominates) {
  const std::vector<Point2> pts{{0, 1}, {1, 4}, {2, 6}, {3, 10}, {4, 10}};
  const auto e = least_squares_envelope(pts);
  for (const auto& p : pts) EXPECT_TRUE(e.dominates(p.x, p.y));
  EXPECT_GE(e.slope, 0.0);
}

TEST(Envelope, NegativeSlopeBecomesFlat) {
  const auto e = least_squares_envelope({{0, 5}, {1, 3}, {2, 1}});
  EXPECT_EQ(e.slope, 0.0);
  EXPECT_EQ(e.intercept, 5.0);
}

TEST(Envelope, MinimalLinearEnvelope) {
  const std::vector<Point2> line{{1, 3}, {2, 5}, {3, 7}};
  const auto e = minimal_linear_envelope(line);
  EXPECT_NEAR(e.slope, 2.0, 1e-12);
  EXPECT_NEAR(e.intercept, 1.0, 1e-12);
  const std::vector<Point2> pts{{0, 1}, {1, 3}, {2, 6}, {3, 9}, {4, 10}, {5, 11}, {6, 12}};
  const auto m = minimal_linear_envelope(pts);
  double total = 0;
  for (const auto& p : pts) {
    EXPECT_TRUE(m.dominates(p.x, p.y));
    total += m(p.x);
  }
  // brute force over lines through pairs of points
  double best = 1e300;
  {
    double t = 0;
    for (const auto& p : pts) t += 12.0 + 0.0 * p.x;
    best = t;  // flat line through the maximum
  }
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      if (b.x <= a.x) continue;
      const double s = (b.y - a.y) / (b.x - a.x);
      if (s < 0) continue;
      const LinearEnvelope c{s, a.y - s * a.x};
      bool ok = true;
      double t = 0;
      for (const auto& p : pts) {
        ok = ok && c.dominates(p.x, p.y);
        t += c(p.x);
      }
      if (ok) best = std::min(best, t);
    }
  }
  EXPECT_NEAR(total, best, 1e-9);
}
