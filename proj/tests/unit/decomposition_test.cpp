#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "kinsep/decomposition.hpp"
#include "kinsep/rr_rrr.hpp"
#include "kinsep/three_rrr.hpp"

using kinsep::GridSpec;
using kinsep::SignVector;

namespace {

const GridSpec& rr_grid() {
  static const GridSpec g = GridSpec::planar({-20, 20, 400}, {-20, 20, 400});
  return g;
}

const GridSpec& coarse_3rrr_grid() {
  static const GridSpec g = GridSpec::planar_oriented({-20, 10, 24}, {-24, 10, 24}, 24);
  return g;
}

}  // namespace

TEST(Aspects, FiveBarCensus) {
  const kinsep::RrRrrModel model;
  kinsep::AspectCensus census;
  for (const auto& mode : kinsep::enumerate_working_modes(2)) {
    auto field = kinsep::sample_field(model, mode, rr_grid());
    const auto result = kinsep::generalized_aspects(field);
    kinsep::add_to_census(census, result.aspects);
  }
  std::map<std::string, int> text;
  for (const auto& [key, n] : census) text[key.str()] = n;
  const std::map<std::string, int> expected{{"(+,+,+)", 1}, {"(+,+,-)", 1}, {"(+,-,+)", 2}, {"(+,-,-)", 1},
                                            {"(-,+,+)", 1}, {"(-,+,-)", 2}, {"(-,-,+)", 1}, {"(-,-,-)", 1}};
  EXPECT_EQ(text, expected);
  EXPECT_EQ(kinsep::census_total(census), 10);
}

TEST(Aspects, CellsAreRegularAndCoverTheGridOnce) {
  const kinsep::RrRrrModel model;
  auto field = kinsep::sample_field(model, SignVector::parse("+-"), rr_grid());
  const auto result = kinsep::generalized_aspects(field);
  std::size_t unlabeled_regular = 0;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const int a = field.aspect(c);
    if (a != kinsep::kNoLabel) {
      ASSERT_TRUE(field.regular(c));
      const auto& info = result.aspects[static_cast<std::size_t>(a)];
      EXPECT_EQ(field.det_sign(c), kinsep::as_class(info.det_sign));
    } else if (field.regular(c)) {
      ++unlabeled_regular;
    }
  }
  EXPECT_EQ(unlabeled_regular, result.unresolved_cells);
  std::size_t labeled = 0;
  for (const auto& a : result.aspects) labeled += a.cells;
  std::size_t regular = 0;
  for (std::size_t c = 0; c < field.size(); ++c) regular += field.regular(c) ? 1 : 0;
  EXPECT_EQ(labeled + result.unresolved_cells, regular);
}

TEST(Aspects, EmptyFieldHasNone) {
  const kinsep::RrRrrModel model;
  auto field = kinsep::sample_field(model, SignVector::parse("++"), GridSpec::planar({100, 101, 8}, {0, 1, 8}));
  EXPECT_TRUE(kinsep::generalized_aspects(field).aspects.empty());
}

TEST(Aspects, PoseMembershipFollowsLabels) {
  const kinsep::RrRrrModel model;
  const SignVector mode = SignVector::parse("-+");
  auto field = kinsep::sample_field(model, mode, rr_grid());
  const auto result = kinsep::generalized_aspects(field);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, field.size() - 1);
  int checked = 0;
  while (checked < 500) {
    const std::size_t c = pick(rng);
    if (field.aspect(c) == kinsep::kNoLabel) continue;
    const auto p = field.grid().pose_at(c);
    const auto s = model.ik_mode(p, mode);
    ASSERT_TRUE(s);
    EXPECT_TRUE(kinsep::pose_in_aspect(model, field, result.aspects, field.aspect(c), p, s->q, 1e-6));
    ++checked;
  }
}

TEST(Surfaces, FiveBarSiblingsNeverShareAnAspect) {
  const kinsep::RrRrrModel model;
  for (const auto& mode : kinsep::enumerate_working_modes(2)) {
    const auto dec = kinsep::decompose(model, mode, rr_grid(), {}, kinsep::DecompositionDepth::Regions);
    for (const auto& a : dec.per_aspect) {
      EXPECT_TRUE(a.surface_cells.empty());
      ASSERT_EQ(a.regions.size(), 1u);
      EXPECT_EQ(a.regions[0].cells, a.aspect.cells);
    }
  }
}

class ThreeRrrCoarse : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    static const kinsep::ThreeRrrModel model;
    model_ = &model;
    dec_ = new kinsep::ModeDecomposition(
        kinsep::decompose(model, SignVector::parse("+++"), coarse_3rrr_grid(), {}, kinsep::DecompositionDepth::Domains));
  }
  static void TearDownTestSuite() { delete dec_; }
  static const kinsep::ThreeRrrModel* model_;
  static kinsep::ModeDecomposition* dec_;
};
const kinsep::ThreeRrrModel* ThreeRrrCoarse::model_ = nullptr;
kinsep::ModeDecomposition* ThreeRrrCoarse::dec_ = nullptr;

TEST_F(ThreeRrrCoarse, RegionsPartitionEachAspect) {
  const auto& field = dec_->field;
  for (const auto& a : dec_->per_aspect) {
    std::set<int> labels;
    std::size_t region_cells = 0;
    for (const auto& r : a.regions) {
      labels.insert(r.label);
      region_cells += r.cells;
    }
    std::size_t aspect_cells = 0, labeled = 0;
    for (std::size_t c = 0; c < field.size(); ++c) {
      if (field.aspect(c) != a.aspect.label) continue;
      ++aspect_cells;
      if (field.region(c) != kinsep::kNoLabel) {
        ++labeled;
        EXPECT_TRUE(labels.contains(field.region(c)));
      } else {
        EXPECT_TRUE(field.surface(c));
      }
    }
    EXPECT_EQ(aspect_cells, a.aspect.cells);
    EXPECT_EQ(labeled, region_cells);
  }
}

TEST_F(ThreeRrrCoarse, SomeAspectIsSplit) {
  std::size_t most = 0;
  for (const auto& a : dec_->per_aspect) most = std::max(most, a.regions.size());
  EXPECT_GT(most, 1u);
}

TEST_F(ThreeRrrCoarse, ComponentImagesAreNonEmpty) {
  for (const auto& a : dec_->per_aspect) {
    ASSERT_EQ(a.images.size(), a.regions.size());
    for (const auto& img : a.images) EXPECT_FALSE(img.cells.empty());
  }
}

TEST_F(ThreeRrrCoarse, RelationsAreDecided) {
  for (const auto& a : dec_->per_aspect) {
    for (const auto& r : a.relations) EXPECT_NE(r.relation, kinsep::ImageRelation::Ambiguous) << r.a << "," << r.b;
  }
}

TEST_F(ThreeRrrCoarse, EveryRegionInSomeDomain) {
  for (const auto& a : dec_->per_aspect) {
    std::set<int> covered;
    for (const auto& d : a.domains) covered.insert(d.regions.begin(), d.regions.end());
    for (const auto& r : a.regions) EXPECT_TRUE(covered.contains(r.label));
  }
}

TEST_F(ThreeRrrCoarse, RegionsHoldOneAssemblyEach) {
  // On region cell centers: among the assemblies of g(X) that
  // belong to X's aspect, only X itself lies in X's region.
  const auto& field = dec_->field;
  std::size_t checked = 0, unique = 0;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const int region = field.region(c);
    if (region == kinsep::kNoLabel) continue;
    int inside = 0;
    for (const auto& sol : model_->fk(field.config(c))) {
      const auto cell = field.grid().locate(sol.pose);
      if (!cell || field.region(*cell) != region) continue;
      if (kinsep::pose_in_aspect(*model_, field, dec_->aspects.aspects, field.aspect(c), sol.pose, field.config(c),
                                 1e-6)) {
        ++inside;
      }
    }
    ++checked;
    unique += inside == 1 ? 1 : 0;
  }
  ASSERT_GT(checked, 2000u);
  EXPECT_GE(static_cast<double>(unique) / static_cast<double>(checked), 0.99);
}

TEST(Decompose, InvariantUnderScanOrder) {
  const kinsep::ThreeRrrModel model;
  const SignVector mode = SignVector::parse("+--");
  kinsep::DecompositionOptions base;
  const auto a = kinsep::decompose(model, mode, coarse_3rrr_grid(), base);
  for (std::uint64_t seed : {7u, 12345u}) {
    kinsep::DecompositionOptions shuffled = base;
    shuffled.scan_seed = seed;
    shuffled.threads = 3;
    const auto b = kinsep::decompose(model, mode, coarse_3rrr_grid(), shuffled);
    ASSERT_EQ(a.per_aspect.size(), b.per_aspect.size());
    for (std::size_t i = 0; i < a.per_aspect.size(); ++i) {
      const auto& x = a.per_aspect[i];
      const auto& y = b.per_aspect[i];
      EXPECT_EQ(x.surface_cells, y.surface_cells);
      ASSERT_EQ(x.domains.size(), y.domains.size());
      for (std::size_t d = 0; d < x.domains.size(); ++d) {
        EXPECT_EQ(x.domains[d].regions, y.domains[d].regions);
        EXPECT_EQ(x.domains[d].cells, y.domains[d].cells);
      }
    }
    for (std::size_t c = 0; c < a.field.size(); ++c) {
      ASSERT_EQ(a.field.aspect(c), b.field.aspect(c));
      ASSERT_EQ(a.field.region(c), b.field.region(c));
    }
  }
}
