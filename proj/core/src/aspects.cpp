#include <algorithm>
#include <cmath>

#include "kinsep/decomposition.hpp"
#include "kinsep/detail/parallel.hpp"
#include "kinsep/errors.hpp"

namespace kinsep {

namespace {

// Bit 0: det A negative; bit j+1: B_jj negative. Only called on regular cells.
int sign_key(const LabeledField& field, std::size_t c) {
  int key = field.det_sign(c) == SignClass::Minus ? 1 : 0;
  for (std::size_t j = 0; j < field.dof(); ++j) {
    if (field.b_sign(c, j) == SignClass::Minus) key |= 1 << (j + 1);
  }
  return key;
}

Sign to_sign(SignClass s) { return s == SignClass::Minus ? Sign::Minus : Sign::Plus; }

bool same_class(const AspectInfo& a, const AspectInfo& b) {
  return a.det_sign == b.det_sign && a.mode == b.mode;
}

}  // namespace

std::string SignClassKey::str() const {
  std::string out = "(";
  out += to_char(det);
  for (Sign s : mode.signs()) {
    out += ',';
    out += to_char(s);
  }
  out += ')';
  return out;
}

void add_to_census(AspectCensus& census, const std::vector<AspectInfo>& aspects) {
  for (const auto& a : aspects) ++census[SignClassKey{a.det_sign, a.mode}];
}

int census_total(const AspectCensus& census) {
  int total = 0;
  for (const auto& [key, count] : census) total += count;
  return total;
}

AspectResult generalized_aspects(LabeledField& field, const AspectOptions& options) {
  const std::size_t n = field.size();
  std::vector<int> key(n, -1);
  for (std::size_t c = 0; c < n; ++c) {
    if (field.regular(c)) key[c] = sign_key(field, c);
  }
  const Components comps = label_components(field.grid(), key, options.scan_seed);

  const double feasible = static_cast<double>(field.feasible_count());
  const auto min_cells = static_cast<std::size_t>(std::ceil(options.min_component_fraction * feasible));

  AspectResult result;
  std::vector<int> relabel(comps.sizes.size(), kNoLabel);
  for (std::size_t i = 0; i < comps.sizes.size(); ++i) {
    if (comps.sizes[i] < std::max<std::size_t>(min_cells, 1)) {
      ++result.dropped_components;
      continue;
    }
    relabel[i] = static_cast<int>(result.aspects.size());
    AspectInfo info;
    info.label = relabel[i];
    info.cells = comps.sizes[i];
    result.aspects.push_back(info);
  }

  std::vector<bool> described(result.aspects.size(), false);
  for (std::size_t c = 0; c < n; ++c) {
    const int raw = comps.label[c];
    const int label = raw == kNoLabel ? kNoLabel : relabel[raw];
    field.set_aspect(c, label);
    if (label == kNoLabel) {
      if (field.feasible(c)) ++result.unresolved_cells;
      continue;
    }
    if (!described[label]) {
      auto& info = result.aspects[label];
      info.det_sign = to_sign(field.det_sign(c));
      std::vector<Sign> b(field.dof());
      for (std::size_t j = 0; j < field.dof(); ++j) b[j] = to_sign(field.b_sign(c, j));
      info.mode = SignVector(std::move(b));
      described[label] = true;
    }
  }
  return result;
}

bool pose_in_aspect(const Manipulator& model, const LabeledField& field,
                    const std::vector<AspectInfo>& aspects, int aspect, const Pose& pose,
                    const ActuatedConfig& q, double zero_tol) {
  const AspectInfo& target = aspects.at(static_cast<std::size_t>(aspect));
  JacobianPair jp;
  try {
    jp = model.jacobians(pose, q);
  } catch (const ResidualViolation&) {
    return false;
  }
  if (classify_sign(jp.det_a, zero_tol) != as_class(target.det_sign)) return false;
  for (std::size_t j = 0; j < target.mode.size(); ++j) {
    if (classify_sign(jp.b_diagonal[j], zero_tol) != as_class(target.mode[j])) return false;
  }
  const auto cell = field.grid().locate(pose);
  if (!cell) return false;
  const int owner = field.aspect(*cell);
  if (owner == aspect || owner == kNoLabel) return true;
  return !same_class(aspects.at(static_cast<std::size_t>(owner)), target);
}

SiblingTable SiblingTable::build(const Manipulator& model, const LabeledField& field,
                                 const std::vector<AspectInfo>& aspects, int aspect,
                                 const SurfaceOptions& options) {
  SiblingTable table;
  table.aspect_ = aspect;
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (field.aspect(c) == aspect) table.cells_.push_back(c);
  }
  std::vector<std::vector<std::size_t>> found(table.cells_.size());
  detail::parallel_for(table.cells_.size(), options.threads, [&](std::size_t i) {
    const std::size_t c = table.cells_[i];
    const Pose self = field.grid().pose_at(c);
    const ActuatedConfig q = field.config(c);
    for (const Assembly& sol : model.fk(q)) {
      if (pose_distance(sol.pose, self) <= options.self_tol) continue;
      if (!pose_in_aspect(model, field, aspects, aspect, sol.pose, q, options.zero_tol)) continue;
      found[i].push_back(*field.grid().locate(sol.pose));
    }
  });
  // The relation is symmetric; a sibling seen from one side only sits in a
  // sliver thinner than a cell, and the reverse entry marks it.
  std::vector<std::vector<std::size_t>> reverse(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t s : found[i]) {
      if (const auto pos = table.position_of(s)) reverse[*pos].push_back(table.cells_[i]);
    }
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    found[i].insert(found[i].end(), reverse[i].begin(), reverse[i].end());
    std::sort(found[i].begin(), found[i].end());
    found[i].erase(std::unique(found[i].begin(), found[i].end()), found[i].end());
  }
  table.offsets_.reserve(found.size() + 1);
  table.offsets_.push_back(0);
  for (const auto& f : found) {
    table.flat_.insert(table.flat_.end(), f.begin(), f.end());
    table.offsets_.push_back(table.flat_.size());
  }
  return table;
}

std::span<const std::size_t> SiblingTable::siblings(std::size_t position) const {
  return {flat_.data() + offsets_[position], offsets_[position + 1] - offsets_[position]};
}

std::optional<std::size_t> SiblingTable::position_of(std::size_t cell) const {
  const auto it = std::lower_bound(cells_.begin(), cells_.end(), cell);
  if (it == cells_.end() || *it != cell) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

std::vector<std::size_t> characteristic_surfaces(const LabeledField& field, const SiblingTable& siblings) {
  const auto& cells = siblings.cells();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t count = siblings.siblings(i).size();
    bool marked = false;
    field.grid().for_each_neighbor(cells[i], [&](std::size_t nb) {
      if (marked || field.aspect(nb) != siblings.aspect()) return;
      if (siblings.siblings(*siblings.position_of(nb)).size() < count) marked = true;
    });
    if (marked) out.push_back(cells[i]);
  }
  return out;
}

std::vector<std::size_t> characteristic_surfaces(const Manipulator& model, const LabeledField& field,
                                                 const std::vector<AspectInfo>& aspects, int aspect,
                                                 const SurfaceOptions& options) {
  return characteristic_surfaces(field, SiblingTable::build(model, field, aspects, aspect, options));
}

std::vector<std::size_t> aspect_boundary(const LabeledField& field, int aspect) {
  const GridSpec& grid = field.grid();
  const std::size_t full = 2 * grid.dims();
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (field.aspect(c) != aspect) continue;
    std::size_t inside = 0;
    grid.for_each_neighbor(c, [&](std::size_t nb) {
      if (field.aspect(nb) == aspect) ++inside;
    });
    if (inside < full) out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> boundary_images(const Manipulator& model, const LabeledField& field,
                                         const std::vector<AspectInfo>& aspects, int aspect,
                                         const SurfaceOptions& options) {
  const auto boundary = aspect_boundary(field, aspect);
  std::vector<std::vector<std::size_t>> found(boundary.size());
  detail::parallel_for(boundary.size(), options.threads, [&](std::size_t i) {
    const Pose self = field.grid().pose_at(boundary[i]);
    const ActuatedConfig q = field.config(boundary[i]);
    for (const Assembly& sol : model.fk(q)) {
      if (pose_distance(sol.pose, self) <= options.self_tol) continue;
      if (!pose_in_aspect(model, field, aspects, aspect, sol.pose, q, options.zero_tol)) continue;
      found[i].push_back(*field.grid().locate(sol.pose));
    }
  });
  std::vector<std::size_t> out;
  for (const auto& f : found) out.insert(out.end(), f.begin(), f.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kinsep
