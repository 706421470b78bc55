#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kinsep/pose.hpp"

namespace kinsep {

/// One grid axis split into `cells` equal cells over [min, max]. A periodic
/// axis identifies min with max.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  int cells = 8;
  bool periodic = false;

  double width() const { return (max - min) / cells; }
  double center(int i) const { return min + (i + 0.5) * width(); }
  std::optional<int> locate(double v) const;
};

/// Regular grid over 1 to 3 axes, flattened with the last axis fastest.
class GridSpec {
 public:
  static constexpr std::size_t kMaxDims = 3;
  using Index = std::array<int, kMaxDims>;

  /// Throws std::invalid_argument on < 8 cells per axis or invalid bounds.
  explicit GridSpec(std::vector<Axis> axes);

  /// Workspace grid of a 2-DOF model over (x, y).
  static GridSpec planar(Axis x, Axis y);
  /// Workspace grid of a 3-DOF model; phi spans (-pi, pi] periodically.
  static GridSpec planar_oriented(Axis x, Axis y, int phi_cells);
  /// Actuated-space grid, every joint spanning (-pi, pi] periodically.
  static GridSpec actuated(int dof, int cells);

  std::size_t dims() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t d) const { return axes_[d]; }
  std::size_t size() const { return size_; }

  Index unravel(std::size_t cell) const;
  std::size_t flat(const Index& idx) const;

  std::vector<double> center(std::size_t cell) const;
  /// Center as a pose: (x, y) or (x, y, phi).
  Pose pose_at(std::size_t cell) const;
  /// Extent of the cell; missing axes give zero-width bounds.
  PoseBox cell_box(std::size_t cell) const;

  std::optional<std::size_t> locate(std::span<const double> coords) const;
  std::optional<std::size_t> locate(const Pose& pose) const;

  /// Axis-aligned neighbours (2 per axis, periodic axes wrap).
  template <class F>
  void for_each_neighbor(std::size_t cell, F&& f) const {
    const Index idx = unravel(cell);
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      for (int step : {-1, 1}) {
        Index n = idx;
        n[d] += step;
        const int cells = axes_[d].cells;
        if (n[d] < 0 || n[d] >= cells) {
          if (!axes_[d].periodic) continue;
          n[d] = (n[d] + cells) % cells;
        }
        f(flat(n));
      }
    }
  }

  /// All cells within Chebyshev distance 1, the cell itself included.
  std::vector<std::size_t> box_neighborhood(std::size_t cell) const;

 private:
  std::vector<Axis> axes_;
  std::array<std::size_t, kMaxDims> stride_{};
  std::size_t size_ = 0;
};

}  // namespace kinsep
