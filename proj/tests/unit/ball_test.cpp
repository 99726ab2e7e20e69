#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <map>

#include "rdwb/ball.hpp"
#include "rdwb/error.hpp"

using namespace rdwb;

namespace {

// Plain BFS over the Cayley graph by right multiplication, keyed by element.
std::map<Element, int> bfs_distances(const GroupModel& m, int radius) {
  std::map<Element, int> dist{{m.identity(), 0}};
  std::deque<Element> queue{m.identity()};
  while (!queue.empty()) {
    const Element x = queue.front();
    queue.pop_front();
    const int d = dist[x];
    if (d == radius) continue;
    for (int l = 0; l < m.alphabet_size(); ++l) {
      const Element y = m.right_multiply(x, static_cast<Letter>(l));
      if (dist.emplace(y, d + 1).second) queue.push_back(y);
    }
  }
  return dist;
}

}  // namespace

TEST(Ball, SphereSizesFreeGroups) {
  for (int n = 1; n <= 3; ++n) {
    const auto ball = BallIndex::enumerate(GroupModel::free(n), 5);
    EXPECT_EQ(ball.sphere_size(0), 1u);
    for (int r = 1; r <= 5; ++r) {
      const double expected = 2.0 * n * std::pow(2.0 * n - 1, r - 1);
      EXPECT_EQ(static_cast<double>(ball.sphere_size(r)), expected) << "n=" << n << " r=" << r;
    }
  }
}

TEST(Ball, SphereSizesFreeAbelian) {
  const auto ball = BallIndex::enumerate(GroupModel::free_abelian(2), 8);
  for (int r = 1; r <= 8; ++r) EXPECT_EQ(ball.sphere_size(r), static_cast<std::size_t>(4 * r));
  const auto line = BallIndex::enumerate(GroupModel::free_abelian(1), 10);
  for (int r = 1; r <= 10; ++r) EXPECT_EQ(line.sphere_size(r), 2u);
}

TEST(Ball, KnownSizes) {
  const auto f2 = BallIndex::enumerate(GroupModel::free(2), 2);
  EXPECT_EQ(f2.sphere_size(1), 4u);
  EXPECT_EQ(f2.sphere_size(2), 12u);
  EXPECT_EQ(BallIndex::enumerate(GroupModel::free_abelian(2), 3).sphere_size(3), 12u);
  EXPECT_EQ(BallIndex::enumerate(GroupModel::free(2), 0).size(), 1u);
  EXPECT_EQ(growth_function(GroupModel::free_abelian(2), 2), 13u);
  EXPECT_EQ(growth_function(GroupModel::free(2), 1), 5u);
  EXPECT_EQ(growth_function(GroupModel::free(2), 0), 1u);
}

TEST(Ball, RanksFollowShortLexAndLengthEqualsDistance) {
  for (const char* d : {"free(2)", "free-abelian(2)", "free-product(free-abelian(1), free-abelian(1))",
                        "direct-product(free(1), cyclic(4))"}) {
    const auto m = GroupModel::parse(d);
    const auto ball = BallIndex::enumerate(m, 5);
    const auto dist = bfs_distances(m, 5);
    ASSERT_EQ(dist.size(), ball.size()) << d;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const Element e = ball.element(static_cast<Rank>(i));
      EXPECT_EQ(dist.at(e), ball.length(static_cast<Rank>(i)));
      EXPECT_EQ(static_cast<int>(e.length()), ball.length(static_cast<Rank>(i)));
      EXPECT_EQ(ball.rank_of(e), i);
      if (i > 0) EXPECT_LT(ball.element(static_cast<Rank>(i - 1)), e);
    }
  }
}

TEST(Ball, TablesAgreeWithModel) {
  const auto m = GroupModel::parse("free-product(free-abelian(1), free-abelian(1))");
  const auto ball = BallIndex::enumerate(m, 4);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Rank r = static_cast<Rank>(i);
    const Element e = ball.element(r);
    EXPECT_EQ(ball.element(ball.inverse(r)), m.inverse(e));
    for (int l = 0; l < m.alphabet_size(); ++l) {
      const Element y = m.right_multiply(e, static_cast<Letter>(l));
      const Rank n = ball.neighbor(r, static_cast<Letter>(l));
      if (y.length() <= 4) {
        ASSERT_NE(n, kNoRank);
        EXPECT_EQ(ball.element(n), y);
      } else {
        EXPECT_EQ(n, kNoRank);
      }
    }
  }
}

TEST(Ball, CanonicalGeodesic) {
  const auto F = GroupModel::free(2);
  const auto fb = BallIndex::enumerate(F, 3);
  EXPECT_EQ(F.format_word(fb.canonical_geodesic(F.parse_element("ab"))), "ab");
  EXPECT_TRUE(fb.canonical_geodesic(F.identity()).empty());
  const auto Z2 = GroupModel::free_abelian(2);
  const auto zb = BallIndex::enumerate(Z2, 3);
  // ShortLex-least of {ab, ba}
  EXPECT_EQ(Z2.format_word(zb.canonical_geodesic(Z2.parse_element("ba"))), "ab");
  EXPECT_THROW(zb.rank_of(Z2.parse_element("aaaa")), RangeError);
}

TEST(Ball, BudgetIsEnforced) {
  EXPECT_THROW(BallIndex::enumerate(GroupModel::free(3), 8, 1000), ResourceError);
}
