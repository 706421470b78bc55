#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "kinsep/decomposition.hpp"
#include "kinsep/errors.hpp"

namespace kinsep {

namespace {

using Link = std::pair<std::size_t, std::size_t>;

Link make_link(std::size_t a, std::size_t b) { return a < b ? Link{a, b} : Link{b, a}; }

// Chebyshev distance in cell indices, periodic axes wrapped.
int index_distance(const GridSpec& grid, std::size_t u, std::size_t v) {
  const auto a = grid.unravel(u);
  const auto b = grid.unravel(v);
  int out = 0;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    int diff = std::abs(a[d] - b[d]);
    if (grid.axis(d).periodic) diff = std::min(diff, grid.axis(d).cells - diff);
    out = std::max(out, diff);
  }
  return out;
}

// Whether the two sibling sets pair up one-to-one within `radius` cells.
bool siblings_match(const GridSpec& grid, std::span<const std::size_t> a, std::span<const std::size_t> b,
                    int radius) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (std::size_t s : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k) {
      if (!used[k] && index_distance(grid, s, b[k]) <= radius) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

RegionSplit basic_regions(LabeledField& field, const SiblingTable& siblings, const RegionOptions& options) {
  const GridSpec& grid = field.grid();
  const auto& cells = siblings.cells();
  std::vector<int> key(field.size(), -1);
  for (std::size_t c : cells) key[c] = 0;

  // Cut links, and per position whether the cell lies on the raised side of one.
  std::set<Link> cut;
  std::vector<bool> raised(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto mine = siblings.siblings(i);
    grid.for_each_neighbor(cells[i], [&](std::size_t nb) {
      if (key[nb] != 0 || nb < cells[i]) return;
      const std::size_t j = *siblings.position_of(nb);
      const auto theirs = siblings.siblings(j);
      if (siblings_match(grid, mine, theirs, options.match_radius)) return;
      cut.insert(make_link(cells[i], nb));
      if (mine.size() >= theirs.size()) {
        raised[i] = true;
      } else {
        raised[j] = true;
      }
    });
  }

  const auto min_cells = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.min_region_fraction * static_cast<double>(cells.size()))));
  const auto linked = [&](std::size_t a, std::size_t b) { return !cut.contains(make_link(a, b)); };

  // Local labels per field cell; kNoLabel outside the aspect and on fragments.
  std::vector<int> local(field.size(), kNoLabel);
  std::vector<std::size_t> sizes;
  const auto relabel = [&] {
    const Components comps = label_components(grid, key, options.scan_seed, linked);
    std::vector<int> kept(comps.sizes.size(), kNoLabel);
    sizes.clear();
    for (std::size_t i = 0; i < comps.sizes.size(); ++i) {
      if (comps.sizes[i] >= min_cells) {
        kept[i] = static_cast<int>(sizes.size());
        sizes.push_back(comps.sizes[i]);
      }
    }
    for (std::size_t c : cells) local[c] = kept[comps.label[c]];
  };
  relabel();

  // A region whose cells see different sets of sibling regions still holds
  // a surface the geometric test missed; cut between the two sets.
  const auto signature = [&](std::size_t pos) {
    std::vector<int> sig;
    for (std::size_t s : siblings.siblings(pos)) {
      if (local[s] != kNoLabel) sig.push_back(local[s]);
    }
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
  };
  for (int pass = 0; pass < options.max_passes; ++pass) {
    std::vector<std::vector<int>> sig(cells.size());
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      sig[i] = signature(i);
      if (!sig[i].empty()) queue.push_back(i);
    }
    // Cells with no labeled sibling take the nearest signature in their region.
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      grid.for_each_neighbor(cells[i], [&](std::size_t nb) {
        if (key[nb] != 0 || local[nb] != local[cells[i]] || !linked(cells[i], nb)) return;
        const std::size_t j = *siblings.position_of(nb);
        if (!sig[j].empty()) return;
        sig[j] = sig[i];
        queue.push_back(j);
      });
    }
    bool changed = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (local[cells[i]] == kNoLabel || sig[i].empty()) continue;
      grid.for_each_neighbor(cells[i], [&](std::size_t nb) {
        if (key[nb] != 0 || nb < cells[i] || local[nb] != local[cells[i]]) return;
        const std::size_t j = *siblings.position_of(nb);
        if (sig[j].empty() || sig[j] == sig[i]) return;
        if (cut.insert(make_link(cells[i], nb)).second) {
          raised[sig[i] < sig[j] ? j : i] = true;
          changed = true;
        }
      });
    }
    if (!changed) break;
    relabel();
  }

  const int base = field.allocate_regions(static_cast<int>(sizes.size()));
  RegionSplit split;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    split.regions.push_back({base + static_cast<int>(k), siblings.aspect(), sizes[k]});
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int k = local[cells[i]];
    field.set_region(cells[i], k == kNoLabel ? kNoLabel : base + k);
    const bool on = raised[i] || k == kNoLabel;
    field.set_surface(cells[i], on);
    if (on) split.surface_cells.push_back(cells[i]);
  }
  return split;
}

std::vector<RegionImage> basic_components(const LabeledField& field, const std::vector<RegionInfo>& regions,
                                          const GridSpec& actuated_grid) {
  if (actuated_grid.dims() != field.dof()) {
    throw std::invalid_argument("basic_components: actuated grid dimension does not match the model");
  }
  std::map<int, std::size_t> slot;
  std::vector<RegionImage> out;
  for (const auto& r : regions) {
    slot[r.label] = out.size();
    out.push_back({r.label, {}});
  }
  for (std::size_t c = 0; c < field.size(); ++c) {
    const auto it = slot.find(field.region(c));
    if (it == slot.end()) continue;
    if (const auto q = actuated_grid.locate(field.angles(c))) out[it->second].cells.push_back(*q);
  }
  for (auto& img : out) {
    std::sort(img.cells.begin(), img.cells.end());
    img.cells.erase(std::unique(img.cells.begin(), img.cells.end()), img.cells.end());
  }
  return out;
}

const char* to_string(ImageRelation r) {
  switch (r) {
    case ImageRelation::Disjoint: return "disjoint";
    case ImageRelation::Identical: return "identical";
    case ImageRelation::Ambiguous: return "ambiguous";
  }
  return "?";
}

std::vector<ComponentRelation> relate_components(const LabeledField& field, const SiblingTable& siblings,
                                                 const std::vector<RegionInfo>& regions, double threshold) {
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < regions.size(); ++i) slot[regions[i].label] = i;
  const std::size_t k = regions.size();
  // A clean cell has every sibling inside some region. Shares are measured on
  // clean cells; any sibling link at all, clean or not, is evidence of overlap.
  std::vector<std::size_t> clean(k, 0);
  std::vector<std::size_t> clean_hits(k * k, 0);
  std::vector<std::size_t> any_hits(k * k, 0);
  const auto& cells = siblings.cells();
  std::vector<bool> touched(k);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto own = slot.find(field.region(cells[i]));
    if (own == slot.end()) continue;
    bool ok = true;
    std::fill(touched.begin(), touched.end(), false);
    for (std::size_t sib : siblings.siblings(i)) {
      const auto other = slot.find(field.region(sib));
      if (other == slot.end()) {
        ok = false;
      } else {
        touched[other->second] = true;
      }
    }
    const std::size_t a = own->second;
    if (ok) ++clean[a];
    for (std::size_t b = 0; b < k; ++b) {
      if (!touched[b]) continue;
      ++any_hits[a * k + b];
      if (ok) ++clean_hits[a * k + b];
    }
  }
  auto share = [&](std::size_t a, std::size_t b) {
    if (clean[a] == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(clean_hits[a * k + b]) / static_cast<double>(clean[a]);
  };
  // An undefined share (no clean cell) defers to the other side.
  auto high = [&](double v) { return std::isnan(v) || v >= 1.0 - threshold; };
  auto low = [&](double v) { return std::isnan(v) || v <= threshold; };

  std::vector<ComponentRelation> out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      ComponentRelation rel;
      rel.a = regions[a].label;
      rel.b = regions[b].label;
      rel.a_in_b = share(a, b);
      rel.b_in_a = share(b, a);
      if (any_hits[a * k + b] == 0 && any_hits[b * k + a] == 0) {
        rel.relation = ImageRelation::Disjoint;
      } else if (high(rel.a_in_b) && high(rel.b_in_a)) {
        rel.relation = ImageRelation::Identical;
      } else if (low(rel.a_in_b) && low(rel.b_in_a)) {
        rel.relation = ImageRelation::Disjoint;
      } else {
        rel.relation = ImageRelation::Ambiguous;
      }
      out.push_back(rel);
    }
  }
  return out;
}

std::vector<std::vector<int>> grow_uniqueness_domains(const DomainGraph& graph) {
  std::vector<DomainGraph::Node> order = graph.nodes;
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.cells != b.cells ? a.cells > b.cells : a.label < b.label;
  });
  std::set<std::pair<int, int>> adjacent;
  std::set<std::pair<int, int>> overlapping;
  for (auto [a, b] : graph.adjacent) {
    adjacent.insert({a, b});
    adjacent.insert({b, a});
  }
  for (auto [a, b] : graph.overlapping) {
    overlapping.insert({a, b});
    overlapping.insert({b, a});
  }

  std::set<int> covered;
  std::vector<std::vector<int>> domains;
  for (const auto& seed : order) {
    if (covered.contains(seed.label)) continue;
    std::vector<int> members{seed.label};
    for (;;) {
      const auto next = std::find_if(order.begin(), order.end(), [&](const auto& node) {
        if (std::find(members.begin(), members.end(), node.label) != members.end()) return false;
        bool touches = false;
        for (int m : members) {
          if (overlapping.contains({m, node.label})) return false;
          touches = touches || adjacent.contains({m, node.label});
        }
        return touches;
      });
      if (next == order.end()) break;
      members.push_back(next->label);
    }
    std::sort(members.begin(), members.end());
    covered.insert(members.begin(), members.end());
    domains.push_back(std::move(members));
  }
  return domains;
}

namespace {

// Box-connected pieces of the aspect's unlabeled cells, each with the regions it touches.
struct FragmentPiece {
  std::vector<std::size_t> cells;
  std::set<int> regions;
};

std::vector<FragmentPiece> fragment_pieces(const LabeledField& field, int aspect, const std::set<int>& labels) {
  auto loose = [&](std::size_t c) { return field.aspect(c) == aspect && field.region(c) == kNoLabel; };
  std::set<std::size_t> seen;
  std::vector<FragmentPiece> pieces;
  for (std::size_t start = 0; start < field.size(); ++start) {
    if (!loose(start) || seen.contains(start)) continue;
    FragmentPiece piece;
    std::vector<std::size_t> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      piece.cells.push_back(c);
      for (std::size_t nb : field.grid().box_neighborhood(c)) {
        if (loose(nb)) {
          if (seen.insert(nb).second) stack.push_back(nb);
        } else if (labels.contains(field.region(nb))) {
          piece.regions.insert(field.region(nb));
        }
      }
    }
    std::sort(piece.cells.begin(), piece.cells.end());
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace

std::vector<UniquenessDomain> uniqueness_domains(const LabeledField& field, int aspect,
                                                 const std::vector<RegionInfo>& regions,
                                                 const std::vector<ComponentRelation>& relations) {
  DomainGraph graph;
  std::set<int> labels;
  std::map<int, std::size_t> sizes;
  for (const auto& r : regions) {
    graph.nodes.push_back({r.label, r.cells});
    labels.insert(r.label);
    sizes[r.label] = r.cells;
  }
  for (const auto& rel : relations) {
    if (rel.relation == ImageRelation::Ambiguous) {
      throw Error("basic components " + std::to_string(rel.a) + " and " + std::to_string(rel.b) +
                  " neither coincide nor separate; refine the grid");
    }
    if (rel.relation == ImageRelation::Identical) graph.overlapping.emplace_back(rel.a, rel.b);
  }

  std::set<std::pair<int, int>> adjacent;
  for (std::size_t c = 0; c < field.size(); ++c) {
    const int r = field.region(c);
    if (!labels.contains(r)) continue;
    field.grid().for_each_neighbor(c, [&](std::size_t nb) {
      const int o = field.region(nb);
      if (o != r && labels.contains(o)) adjacent.insert({std::min(r, o), std::max(r, o)});
    });
  }
  const auto pieces = fragment_pieces(field, aspect, labels);
  for (const auto& p : pieces) {
    for (auto a = p.regions.begin(); a != p.regions.end(); ++a) {
      for (auto b = std::next(a); b != p.regions.end(); ++b) adjacent.insert({*a, *b});
    }
  }
  graph.adjacent.assign(adjacent.begin(), adjacent.end());

  std::vector<UniquenessDomain> out;
  for (auto& members : grow_uniqueness_domains(graph)) {
    UniquenessDomain d;
    d.aspect = aspect;
    d.regions = std::move(members);
    for (int r : d.regions) d.cells += sizes[r];
    for (const auto& p : pieces) {
      const auto inside = std::count_if(p.regions.begin(), p.regions.end(), [&](int r) {
        return std::binary_search(d.regions.begin(), d.regions.end(), r);
      });
      if (inside >= 2) d.surface_cells.insert(d.surface_cells.end(), p.cells.begin(), p.cells.end());
    }
    std::sort(d.surface_cells.begin(), d.surface_cells.end());
    d.cells += d.surface_cells.size();
    out.push_back(std::move(d));
  }
  return out;
}

bool pose_in_domain(const Manipulator& model, const LabeledField& field,
                    const std::vector<AspectInfo>& aspects, const UniquenessDomain& domain,
                    const Pose& pose, const ActuatedConfig& q, double zero_tol) {
  if (!pose_in_aspect(model, field, aspects, domain.aspect, pose, q, zero_tol)) return false;
  const std::size_t c = *field.grid().locate(pose);
  if (std::binary_search(domain.regions.begin(), domain.regions.end(), field.region(c))) return true;
  return std::binary_search(domain.surface_cells.begin(), domain.surface_cells.end(), c);
}

}  // namespace kinsep
