#include "kinsep/field.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kinsep/detail/parallel.hpp"

namespace kinsep {

LabeledField::LabeledField(GridSpec grid, SignVector mode)
    : grid_(std::move(grid)),
      mode_(std::move(mode)),
      feasible_(grid_.size(), 0),
      det_(grid_.size(), static_cast<std::uint8_t>(SignClass::NearZero)),
      b_(grid_.size() * mode_.size(), static_cast<std::uint8_t>(SignClass::NearZero)),
      q_(grid_.size() * mode_.size(), 0.0),
      aspect_(grid_.size(), kNoLabel),
      region_(grid_.size(), kNoLabel),
      surface_(grid_.size(), 0) {
  if (mode_.size() == 0) throw std::invalid_argument("LabeledField: empty working mode");
}

bool LabeledField::regular(std::size_t c) const {
  if (!feasible(c) || det_sign(c) == SignClass::NearZero) return false;
  for (std::size_t j = 0; j < dof(); ++j) {
    if (b_sign(c, j) == SignClass::NearZero) return false;
  }
  return true;
}

ActuatedConfig LabeledField::config(std::size_t c) const {
  const auto a = angles(c);
  return ActuatedConfig(std::vector<double>(a.begin(), a.end()));
}

int LabeledField::allocate_regions(int count) {
  const int first = region_count_;
  region_count_ += count;
  return first;
}

void LabeledField::record(std::size_t c, const ActuatedConfig& q, const JacobianPair& jp, double zero_tol) {
  feasible_[c] = 1;
  det_[c] = static_cast<std::uint8_t>(classify_sign(jp.det_a, zero_tol));
  for (std::size_t j = 0; j < dof(); ++j) {
    b_[c * dof() + j] = static_cast<std::uint8_t>(classify_sign(jp.b_diagonal[j], zero_tol));
    q_[c * dof() + j] = q[j];
  }
}

std::size_t LabeledField::feasible_count() const {
  return static_cast<std::size_t>(std::count(feasible_.begin(), feasible_.end(), std::uint8_t{1}));
}

LabeledField sample_field(const Manipulator& model, const SignVector& mode, const GridSpec& grid,
                          const SampleOptions& options) {
  if (static_cast<int>(mode.size()) != model.dof()) {
    throw std::invalid_argument("sample_field: mode length does not match the model");
  }
  LabeledField field(grid, mode);
  // Every cell writes only its own slots.
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t c) {
    const Pose pose = grid.pose_at(c);
    const auto sol = model.ik_mode(pose, mode);
    if (!sol) return;
    field.record(c, sol->q, model.jacobians(pose, sol->q), options.zero_tol);
    const auto folded = model.folded_legs_in_box(grid.cell_box(c));
    for (std::size_t j = 0; j < folded.size(); ++j) {
      if (folded[j]) field.mark_serial_singular(c, j);
    }
  });
  return field;
}

std::vector<std::size_t> parallel_singular_cells(const LabeledField& field) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (!field.feasible(c)) continue;
    const SignClass s = field.det_sign(c);
    bool hit = s == SignClass::NearZero;
    field.grid().for_each_neighbor(c, [&](std::size_t nb) {
      if (!hit && field.feasible(nb) && field.det_sign(nb) != s && field.det_sign(nb) != SignClass::NearZero) hit = true;
    });
    if (hit) out.push_back(c);
  }
  return out;
}

Components label_components(const GridSpec& grid, std::span<const int> key,
                            std::optional<std::uint64_t> scan_seed, const LinkPredicate& linked) {
  if (key.size() != grid.size()) throw std::invalid_argument("label_components: key size mismatch");
  const std::size_t n = grid.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (scan_seed) {
    std::mt19937_64 rng(*scan_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<int> raw(n, kNoLabel);
  std::vector<std::size_t> smallest;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> stack;
  for (std::size_t seed : order) {
    if (key[seed] < 0 || raw[seed] != kNoLabel) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t count = 0;
    std::size_t low = seed;
    raw[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++count;
      low = std::min(low, c);
      grid.for_each_neighbor(c, [&](std::size_t nb) {
        if (raw[nb] == kNoLabel && key[nb] == key[c] && (!linked || linked(c, nb))) {
          raw[nb] = id;
          stack.push_back(nb);
        }
      });
    }
    smallest.push_back(low);
    sizes.push_back(count);
  }

  std::vector<int> rank(sizes.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](int a, int b) { return smallest[a] < smallest[b]; });
  std::vector<int> canonical(sizes.size());
  Components out;
  out.sizes.resize(sizes.size());
  for (std::size_t i = 0; i < rank.size(); ++i) {
    canonical[rank[i]] = static_cast<int>(i);
    out.sizes[i] = sizes[rank[i]];
  }
  out.label.resize(n, kNoLabel);
  for (std::size_t c = 0; c < n; ++c) {
    if (raw[c] != kNoLabel) out.label[c] = canonical[raw[c]];
  }
  return out;
}

}  // namespace kinsep
