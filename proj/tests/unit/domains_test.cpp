#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include "kinsep/decomposition.hpp"

using kinsep::DomainGraph;

namespace {

using Domains = std::vector<std::vector<int>>;

}  // namespace

TEST(GrowDomains, OverlappingImagesSplitAChain) {
  // b11 - b12 - b13 adjacent, images of b11 and b13 coincide, b14 touches nothing.
  DomainGraph g;
  g.nodes = {{11, 50}, {12, 40}, {13, 30}, {14, 20}};
  g.adjacent = {{11, 12}, {12, 13}};
  g.overlapping = {{11, 13}};
  EXPECT_EQ(kinsep::grow_uniqueness_domains(g), (Domains{{11, 12}, {12, 13}, {14}}));
}

TEST(GrowDomains, SameResultWhateverTheMiddleSize) {
  DomainGraph g;
  g.nodes = {{11, 10}, {12, 90}, {13, 30}, {14, 20}};
  g.adjacent = {{12, 11}, {13, 12}};
  g.overlapping = {{13, 11}};
  auto domains = kinsep::grow_uniqueness_domains(g);
  std::sort(domains.begin(), domains.end());
  EXPECT_EQ(domains, (Domains{{11, 12}, {12, 13}, {14}}));
}

TEST(GrowDomains, SingleRegion) {
  DomainGraph g;
  g.nodes = {{3, 7}};
  EXPECT_EQ(kinsep::grow_uniqueness_domains(g), (Domains{{3}}));
}

TEST(GrowDomains, DisjointChainMergesWhole) {
  DomainGraph g;
  g.nodes = {{0, 5}, {1, 5}, {2, 5}, {3, 5}};
  g.adjacent = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(kinsep::grow_uniqueness_domains(g), (Domains{{0, 1, 2, 3}}));
}

TEST(GrowDomains, TiesBrokenByLabel) {
  DomainGraph g;
  g.nodes = {{2, 5}, {1, 5}, {0, 5}};
  g.adjacent = {{0, 1}, {1, 2}};
  g.overlapping = {{0, 2}};
  EXPECT_EQ(kinsep::grow_uniqueness_domains(g), (Domains{{0, 1}, {1, 2}}));
}

TEST(GrowDomains, EveryRegionCoveredAndDomainsAreAdmissible) {
  // Ring of 8 regions where every region overlaps the one opposite to it.
  DomainGraph g;
  for (int i = 0; i < 8; ++i) {
    g.nodes.push_back({i, static_cast<std::size_t>(10 + i)});
    g.adjacent.push_back({i, (i + 1) % 8});
  }
  for (int i = 0; i < 4; ++i) g.overlapping.push_back({i, i + 4});
  const auto domains = kinsep::grow_uniqueness_domains(g);
  std::set<int> covered;
  for (const auto& d : domains) {
    covered.insert(d.begin(), d.end());
    for (int a : d) {
      for (int b : d) EXPECT_NE(std::abs(a - b), 4);
    }
  }
  EXPECT_EQ(covered.size(), 8u);
}
