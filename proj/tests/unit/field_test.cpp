#include <gtest/gtest.h>

#include <cmath>

#include "kinsep/detail/parallel.hpp"
#include "kinsep/field.hpp"
#include "kinsep/rr_rrr.hpp"
#include "kinsep/three_rrr.hpp"

using kinsep::Axis;
using kinsep::GridSpec;
using kinsep::SignClass;
using kinsep::SignVector;

TEST(Grid, FlatUnravelRoundTrip) {
  const GridSpec g = GridSpec::planar_oriented({0, 1, 8}, {0, 2, 9}, 10);
  for (std::size_t c = 0; c < g.size(); c += 7) EXPECT_EQ(g.flat(g.unravel(c)), c);
  EXPECT_EQ(g.size(), 720u);
}

TEST(Grid, LocateCenters) {
  const GridSpec g = GridSpec::planar({-1, 1, 8}, {0, 4, 8});
  for (std::size_t c = 0; c < g.size(); ++c) EXPECT_EQ(g.locate(g.pose_at(c)), c);
  EXPECT_FALSE(g.locate(kinsep::Pose(2, 1)));
}

TEST(Grid, PeriodicAxisWraps) {
  const GridSpec g = GridSpec::actuated(2, 8);
  std::vector<std::size_t> nbs;
  g.for_each_neighbor(0, [&](std::size_t nb) { nbs.push_back(nb); });
  EXPECT_EQ(nbs.size(), 4u);
  EXPECT_NE(std::find(nbs.begin(), nbs.end(), g.flat({7, 0, 0})), nbs.end());
}

TEST(Grid, RejectsCoarseOrInvalid) {
  EXPECT_THROW(GridSpec({Axis{0, 1, 4}}), std::invalid_argument);
  EXPECT_THROW(GridSpec({Axis{1, 0, 8}}), std::invalid_argument);
}

TEST(SampleField, FeasibleSetIsIntersectionOfAnnuli) {
  const kinsep::RrRrrModel model;
  const GridSpec grid = GridSpec::planar({-13, 22, 400}, {-13, 13, 400});
  for (const auto& mode : kinsep::enumerate_working_modes(2)) {
    const auto field = kinsep::sample_field(model, mode, grid);
    std::size_t mismatches = 0;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const auto p = grid.pose_at(c);
      const double r1 = std::hypot(p.x(), p.y());
      const double r2 = std::hypot(p.x() - 9, p.y());
      const bool inside = r1 > 3 && r1 < 13 && r2 > 3 && r2 < 13;
      if (field.feasible(c) != inside) ++mismatches;
    }
    EXPECT_EQ(mismatches, 0u) << mode.str();
  }
}

TEST(SampleField, OutOfReachBoxIsInfeasible) {
  const kinsep::RrRrrModel model;
  const GridSpec grid = GridSpec::planar({100, 101, 8}, {0, 1, 8});
  const auto field = kinsep::sample_field(model, SignVector::parse("++"), grid);
  EXPECT_EQ(field.feasible_count(), 0u);
}

TEST(SampleField, SerialSignsMatchMode) {
  const kinsep::ThreeRrrModel model;
  const GridSpec grid = GridSpec::planar_oriented({-20, 10, 16}, {-24, 10, 16}, 16);
  for (const auto& mode : kinsep::enumerate_working_modes(3)) {
    const auto field = kinsep::sample_field(model, mode, grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      if (!field.feasible(c)) continue;
      for (std::size_t j = 0; j < 3; ++j) {
        const SignClass s = field.b_sign(c, j);
        if (s != SignClass::NearZero) EXPECT_EQ(s, kinsep::as_class(mode[j]));
      }
    }
  }
}

TEST(SampleField, IndependentOfThreadCount) {
  const kinsep::RrRrrModel model;
  const GridSpec grid = GridSpec::planar({-13, 22, 64}, {-13, 13, 64});
  const auto one = kinsep::sample_field(model, SignVector::parse("+-"), grid, {1e-6, 1});
  const auto four = kinsep::sample_field(model, SignVector::parse("+-"), grid, {1e-6, 4});
  for (std::size_t c = 0; c < grid.size(); ++c) {
    ASSERT_EQ(one.feasible(c), four.feasible(c));
    ASSERT_EQ(one.det_sign(c), four.det_sign(c));
    for (std::size_t j = 0; j < 2; ++j) ASSERT_EQ(one.angles(c)[j], four.angles(c)[j]);
  }
}

TEST(LabelComponents, CanonicalUnderScanOrder) {
  const GridSpec grid = GridSpec::planar({0, 1, 12}, {0, 1, 12});
  std::vector<int> key(grid.size(), -1);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto idx = grid.unravel(c);
    if (idx[0] != 5) key[c] = idx[1] < 6 ? 0 : 1;
  }
  const auto base = kinsep::label_components(grid, key);
  EXPECT_EQ(base.sizes.size(), 4u);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto shuffled = kinsep::label_components(grid, key, seed);
    EXPECT_EQ(shuffled.label, base.label);
    EXPECT_EQ(shuffled.sizes, base.sizes);
  }
}

TEST(LabelComponents, LinkPredicateCuts) {
  const GridSpec grid = GridSpec::planar({0, 1, 8}, {0, 1, 8});
  std::vector<int> key(grid.size(), 0);
  const auto comps = kinsep::label_components(grid, key, std::nullopt, [&](std::size_t a, std::size_t b) {
    return (grid.unravel(a)[0] < 4) == (grid.unravel(b)[0] < 4);
  });
  EXPECT_EQ(comps.sizes, (std::vector<std::size_t>{32, 32}));
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(kinsep::detail::parallel_for(100, 4,
                                            [](std::size_t i) {
                                              if (i == 57) throw std::runtime_error("x");
                                            }),
               std::runtime_error);
}
