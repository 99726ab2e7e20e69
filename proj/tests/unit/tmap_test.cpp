#include <gtest/gtest.h>

#include <array>

#include "rdwb/ball.hpp"
#include "rdwb/error.hpp"
#include "rdwb/tmap.hpp"

using namespace rdwb;

namespace {

const GroupModel& z2() {
  static const GroupModel m = GroupModel::free_abelian(2);
  return m;
}

Element pt(long x, long y) {
  const std::array<long, 2> c{x, y};
  return z2().from_abelian_coordinates(c);
}

std::size_t dist(const GroupModel& m, const Element& u, const Element& v) {
  return m.multiply(m.inverse(u), v).length();
}

}  // namespace

TEST(TMapZ2, Examples) {
  EXPECT_EQ(tmap_z2(z2(), pt(2, 0), pt(0, 3)).a, pt(0, 0));
  EXPECT_EQ(tmap_z2(z2(), pt(4, 1), pt(2, 5)).a, pt(2, 1));
  const auto same = tmap_z2(z2(), pt(-3, 2), pt(-3, 2));
  EXPECT_EQ(same.a, pt(-3, 2));
  EXPECT_TRUE(same.g_prime.is_identity());
  EXPECT_TRUE(same.h_prime.is_identity());
  EXPECT_THROW(tmap_z2(GroupModel::free(2), GroupModel::free(2).identity(),
                       GroupModel::free(2).identity()),
               UsageError);
}

TEST(TMapZ2, MedianLiesOnEveryGeodesic) {
  const auto ball = BallIndex::enumerate(z2(), 3);
  const auto& m = z2();
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const Element g = ball.element(static_cast<Rank>(i));
      const Element h = ball.element(static_cast<Rank>(j));
      const Element a = tmap_z2(m, g, h).a;
      const std::array<Element, 3> V{m.identity(), g, h};
      for (int u = 0; u < 3; ++u) {
        for (int v = u + 1; v < 3; ++v) {
          ASSERT_EQ(dist(m, V[u], a) + dist(m, a, V[v]), dist(m, V[u], V[v]));
        }
      }
    }
  }
}

TEST(TMapPolygrowth, Examples) {
  // cyclic(7): L(g)=1, L(h)=3, L(h^-1 g)=3, so [1,g] is the unique shortest side
  const auto C7 = GroupModel::cyclic(7);
  const Element g = C7.parse_element("a");
  const Element h = C7.parse_element("AAA");
  ASSERT_EQ(C7.multiply(C7.inverse(h), g).length(), 3u);
  const auto t = tmap_polygrowth(C7, g, h);
  EXPECT_TRUE(t.a == g || t.a == C7.identity());
  EXPECT_TRUE(t.g_prime.is_identity());
  EXPECT_TRUE(t.h_prime.is_identity());
  // [1,h] strictly shortest: a is one of its endpoints
  const auto u = tmap_polygrowth(z2(), pt(3, 1), pt(1, 0));
  EXPECT_TRUE(u.a == pt(0, 0) || u.a == pt(1, 0));
  EXPECT_EQ(tmap_polygrowth(z2(), pt(0, 0), pt(0, 0)).a, pt(0, 0));
}

TEST(TMapPolygrowth, SwapAndRebaseAreExact) {
  const auto& m = z2();
  const auto ball = BallIndex::enumerate(m, 3);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const Element g = ball.element(static_cast<Rank>(i));
      const Element h = ball.element(static_cast<Rank>(j));
      const auto t = tmap_polygrowth(m, g, h);
      const auto s = tmap_polygrowth(m, h, g);
      ASSERT_EQ(s.a, t.a);
      const Element hi = m.inverse(h);
      const auto r = tmap_polygrowth(m, hi, m.multiply(hi, g));
      ASSERT_EQ(r.a, m.multiply(hi, t.a));
    }
  }
}

TEST(VerifyTMap, Z2ConditionsOneAndTwo) {
  const auto rep = verify_tmap(make_z2_tmap(z2()), 4);
  EXPECT_TRUE(rep.condition_i);
  EXPECT_TRUE(rep.condition_ii);
  for (auto v : rep.max_h_prime) EXPECT_EQ(v, 0u);
  EXPECT_EQ(rep.pairs_checked, 41u * 41u);
  // brute-force recount of the (iii) maxima
  const auto ball = BallIndex::enumerate(z2(), 4);
  std::vector<std::size_t> best(5, 0);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Element g = ball.element(static_cast<Rank>(i));
    std::vector<std::set<std::pair<Element, Element>>> per_r(5);
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const Element h = ball.element(static_cast<Rank>(j));
      const Element a = tmap_z2(z2(), g, h).a;
      per_r[h.length()].emplace(a, a);
    }
    for (int r = 0; r <= 4; ++r) best[r] = std::max(best[r], per_r[r].size());
  }
  EXPECT_EQ(rep.max_count, best);
}

TEST(VerifyTMap, PolygrowthPasses) {
  const auto rep = verify_tmap(make_polygrowth_tmap(z2()), 3);
  EXPECT_TRUE(rep.pass);
  EXPECT_FALSE(rep.counterexample);
}

TEST(TMapFromStar, Examples) {
  const auto m = GroupModel::parse("free-product(free-abelian(1), free-abelian(1))");
  const StarConstants c{0, 1};
  const auto geo = StarGeometry::build(m, PeripheralStructure::factors(m), 0, 8);
  auto e = [&](const char* s) { return m.parse_element(s); };
  const auto t = tmap_from_star(*geo, c, e("ab"), e("a"));
  EXPECT_EQ(t, (TMapValue{e("1"), e("a"), e("a"), 0}));
  for (const char* s : {"ab", "bA", "aab"}) {
    const auto d = tmap_from_star(*geo, c, e(s), e(s));
    EXPECT_EQ(d.g_prime, d.h_prime) << s;
  }
  EXPECT_EQ(tmap_from_star(*geo, c, e("1"), e("1")), (TMapValue{e("1"), e("1"), e("1"), 0}));
}

TEST(TMapFromStar, FlatPlaneIsStructuralError) {
  const auto& m = z2();
  const auto periph = PeripheralStructure::trivial(m);
  const auto geo = StarGeometry::build(m, periph, 1, 12);
  const auto ball = BallIndex::enumerate(m, 4);
  std::size_t structural = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      try {
        tmap_from_star(*geo, {1, 1}, ball.element(static_cast<Rank>(i)), ball.element(static_cast<Rank>(j)));
      } catch (const StructuralError&) {
        ++structural;
      }
    }
  }
  // fat flat triangles have no central decomposition
  EXPECT_GT(structural, 0u);
}

TEST(VerifyTMap, StarDerivedPassesOnSmallBall) {
  const auto m = GroupModel::parse("free-product(free-abelian(1), free-abelian(1))");
  const StarConstants c{0, 1};
  auto geo = StarGeometry::build(m, PeripheralStructure::factors(m), 0, 8);
  const auto rep = verify_tmap(make_star_tmap(geo, c), 3);
  EXPECT_TRUE(rep.condition_i);
  EXPECT_TRUE(rep.pass);
  EXPECT_GE(rep.Q1_fit.slope, 0.0);
  EXPECT_GE(rep.Q2_fit.slope, 0.0);
}
