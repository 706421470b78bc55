#include "kinsep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinsep {

std::optional<int> Axis::locate(double v) const {
  if (!std::isfinite(v)) return std::nullopt;
  if (periodic) {
    const double span = max - min;
    v = min + std::fmod(std::fmod(v - min, span) + span, span);
  } else if (v < min || v > max) {
    return std::nullopt;
  }
  const int i = static_cast<int>(std::floor((v - min) / width()));
  return std::clamp(i, 0, cells - 1);
}

GridSpec::GridSpec(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > kMaxDims) {
    throw std::invalid_argument("grid needs 1 to 3 axes");
  }
  size_ = 1;
  for (std::size_t d = axes_.size(); d-- > 0;) {
    const Axis& a = axes_[d];
    if (a.cells < 8) throw std::invalid_argument("grid resolution must be at least 8 cells per axis");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max)) {
      throw std::invalid_argument("grid bounds must be finite with min < max");
    }
    stride_[d] = size_;
    size_ *= static_cast<std::size_t>(a.cells);
  }
}

GridSpec GridSpec::planar(Axis x, Axis y) {
  x.periodic = false;
  y.periodic = false;
  return GridSpec({x, y});
}

GridSpec GridSpec::planar_oriented(Axis x, Axis y, int phi_cells) {
  x.periodic = false;
  y.periodic = false;
  return GridSpec({x, y, Axis{-std::numbers::pi, std::numbers::pi, phi_cells, true}});
}

GridSpec GridSpec::actuated(int dof, int cells) {
  std::vector<Axis> axes(static_cast<std::size_t>(dof),
                         Axis{-std::numbers::pi, std::numbers::pi, cells, true});
  return GridSpec(std::move(axes));
}

GridSpec::Index GridSpec::unravel(std::size_t cell) const {
  Index idx{};
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    idx[d] = static_cast<int>(cell / stride_[d]);
    cell %= stride_[d];
  }
  return idx;
}

std::size_t GridSpec::flat(const Index& idx) const {
  std::size_t cell = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) cell += static_cast<std::size_t>(idx[d]) * stride_[d];
  return cell;
}

std::vector<double> GridSpec::center(std::size_t cell) const {
  const Index idx = unravel(cell);
  std::vector<double> c(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) c[d] = axes_[d].center(idx[d]);
  return c;
}

Pose GridSpec::pose_at(std::size_t cell) const {
  const std::vector<double> c = center(cell);
  return Pose(c[0], c.size() > 1 ? c[1] : 0.0, c.size() > 2 ? c[2] : 0.0);
}

PoseBox GridSpec::cell_box(std::size_t cell) const {
  const Index idx = unravel(cell);
  std::array<double, 6> b{};
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const Axis& a = axes_[d];
    b[2 * d] = a.min + idx[d] * a.width();
    b[2 * d + 1] = b[2 * d] + a.width();
  }
  return {b[0], b[1], b[2], b[3], b[4], b[5]};
}

std::optional<std::size_t> GridSpec::locate(std::span<const double> coords) const {
  if (coords.size() != axes_.size()) return std::nullopt;
  Index idx{};
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto i = axes_[d].locate(coords[d]);
    if (!i) return std::nullopt;
    idx[d] = *i;
  }
  return flat(idx);
}

std::optional<std::size_t> GridSpec::locate(const Pose& pose) const {
  const std::array<double, 3> c{pose.x(), pose.y(), pose.phi()};
  return locate(std::span<const double>(c.data(), std::min<std::size_t>(axes_.size(), 3)));
}

std::vector<std::size_t> GridSpec::box_neighborhood(std::size_t cell) const {
  const Index idx = unravel(cell);
  std::vector<std::size_t> out;
  const std::size_t dims = axes_.size();
  std::size_t combos = 1;
  for (std::size_t d = 0; d < dims; ++d) combos *= 3;
  for (std::size_t k = 0; k < combos; ++k) {
    Index n = idx;
    std::size_t rem = k;
    bool valid = true;
    for (std::size_t d = 0; d < dims; ++d) {
      n[d] += static_cast<int>(rem % 3) - 1;
      rem /= 3;
      const int cells = axes_[d].cells;
      if (n[d] < 0 || n[d] >= cells) {
        if (!axes_[d].periodic) {
          valid = false;
          break;
        }
        n[d] = (n[d] + cells) % cells;
      }
    }
    if (valid) out.push_back(flat(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace kinsep
