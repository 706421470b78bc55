#include <gtest/gtest.h>

#include <random>

#include "kinsep/leg.hpp"
#include "oracles.hpp"

using kinsep::Vec2;

namespace {

double angle_err(double a, double b) { return kinsep::angle_distance(a, b); }

}  // namespace

TEST(SolveLeg, MatchesAngleScan) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-14, 14);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Vec2 target{u(rng), u(rng)};
    const auto sol = kinsep::solve_leg({0, 0}, target, 8, 5);
    const auto roots = oracle::scan_leg_roots({0, 0}, target, 8, 5, 20000, 1e-12);
    if (sol.count == 1) continue;
    ASSERT_EQ(static_cast<std::size_t>(sol.count), roots.size()) << target.x << "," << target.y;
    if (sol.count == 2) {
      ++checked;
      for (double r : roots) EXPECT_LT(std::min(angle_err(r, sol.plus), angle_err(r, sol.minus)), 1e-9);
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(SolveLeg, PlusBranchHasPositiveSerialTerm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int k = 0; k < 500; ++k) {
    const Vec2 anchor{u(rng), u(rng)};
    const Vec2 target{u(rng), u(rng)};
    const auto sol = kinsep::solve_leg(anchor, target, 6, 7);
    if (sol.count != 2) continue;
    EXPECT_GT(kinsep::leg_serial_term(anchor, target, 6, sol.plus), 0);
    EXPECT_LT(kinsep::leg_serial_term(anchor, target, 6, sol.minus), 0);
  }
}

TEST(SolveLeg, FullExtensionIsDoubleRoot) {
  const auto sol = kinsep::solve_leg({0, 0}, {13, 0}, 8, 5);
  EXPECT_EQ(sol.count, 1);
  EXPECT_NEAR(sol.plus, 0.0, 1e-9);
  EXPECT_NEAR(kinsep::leg_serial_term({0, 0}, {13, 0}, 8, sol.plus), 0.0, 1e-9);
}

TEST(SolveLeg, OutOfReach) {
  EXPECT_EQ(kinsep::solve_leg({0, 0}, {14, 0}, 8, 5).count, 0);
  EXPECT_EQ(kinsep::solve_leg({0, 0}, {1, 0}, 8, 5).count, 0);
}

TEST(CombineLegs, CrossProductInModeOrder) {
  const std::vector<kinsep::LegSolution> legs{{2, 0.1, 0.2}, {2, 0.3, 0.4}};
  const auto c = kinsep::combine_legs(legs);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].mode.str(), "++");
  EXPECT_EQ(c[1].mode.str(), "+-");
  EXPECT_EQ(c[3].mode.str(), "--");
  EXPECT_DOUBLE_EQ(c[1].angles[1], 0.4);
}

TEST(CombineLegs, DoubleRootOnceAndEmptyPropagates) {
  const std::vector<kinsep::LegSolution> singular{{1, 0.5, 0.5}, {2, 0.3, 0.4}};
  const auto c = kinsep::combine_legs(singular);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_TRUE(c[0].singular_legs[0]);
  const std::vector<kinsep::LegSolution> none{{0, 0, 0}, {2, 0.3, 0.4}};
  EXPECT_TRUE(kinsep::combine_legs(none).empty());
}
