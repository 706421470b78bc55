#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kinsep/grid.hpp"
#include "kinsep/manipulator.hpp"

namespace kinsep {

inline constexpr int kNoLabel = -1;

/// Workspace grid sampled in one working mode.
///
/// Each cell records whether the mode's inverse kinematics exists at the cell
/// center, the sign classes of det A and of every B_jj there, and the labels
/// assigned by the later decomposition stages.
class LabeledField {
 public:
  LabeledField(GridSpec grid, SignVector mode);

  const GridSpec& grid() const { return grid_; }
  const SignVector& mode() const { return mode_; }
  std::size_t dof() const { return mode_.size(); }
  std::size_t size() const { return grid_.size(); }

  bool feasible(std::size_t c) const { return feasible_[c] != 0; }
  SignClass det_sign(std::size_t c) const { return static_cast<SignClass>(det_[c]); }
  SignClass b_sign(std::size_t c, std::size_t leg) const {
    return static_cast<SignClass>(b_[c * dof() + leg]);
  }
  /// Feasible with no NearZero classification.
  bool regular(std::size_t c) const;
  std::span<const double> angles(std::size_t c) const { return {q_.data() + c * dof(), dof()}; }
  ActuatedConfig config(std::size_t c) const;

  int aspect(std::size_t c) const { return aspect_[c]; }
  int region(std::size_t c) const { return region_[c]; }
  bool surface(std::size_t c) const { return surface_[c] != 0; }
  void set_aspect(std::size_t c, int label) { aspect_[c] = label; }
  void set_region(std::size_t c, int label) { region_[c] = label; }
  void set_surface(std::size_t c, bool on) { surface_[c] = on ? 1 : 0; }
  /// Classifies B_jj of a feasible cell as NearZero.
  void mark_serial_singular(std::size_t c, std::size_t leg) {
    b_[c * dof() + leg] = static_cast<std::uint8_t>(SignClass::NearZero);
  }

  /// Reserves `count` consecutive region labels, returning the first.
  int allocate_regions(int count);
  int region_count() const { return region_count_; }

  void record(std::size_t c, const ActuatedConfig& q, const JacobianPair& jp, double zero_tol);
  std::size_t feasible_count() const;

 private:
  GridSpec grid_;
  SignVector mode_;
  std::vector<std::uint8_t> feasible_;
  std::vector<std::uint8_t> det_;
  std::vector<std::uint8_t> b_;
  std::vector<double> q_;
  std::vector<int> aspect_;
  std::vector<int> region_;
  std::vector<std::uint8_t> surface_;
  int region_count_ = 0;
};

struct SampleOptions {
  double zero_tol = 1e-6;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

/// Runs ik_mode at every cell center and classifies det A and the B_jj. A
/// leg whose folded point singularity passes through the cell (see
/// Manipulator::folded_legs_in_box) gets a NearZero B_jj.
LabeledField sample_field(const Manipulator& model, const SignVector& mode, const GridSpec& grid,
                          const SampleOptions& options = {});

/// Rasterized parallel-singularity locus: feasible cells whose det A is
/// NearZero or has the opposite sign at a feasible axis neighbour. Sorted.
std::vector<std::size_t> parallel_singular_cells(const LabeledField& field);

/// Axis-connected components of cells sharing one non-negative key; negative
/// keys are excluded. Labels are ordered by each component's smallest cell, so
/// they do not depend on `scan_seed`, which only permutes the visiting order.
/// `linked`, when given, can additionally cut individual neighbour pairs.
struct Components {
  std::vector<int> label;  ///< per cell, kNoLabel when excluded
  std::vector<std::size_t> sizes;
};
using LinkPredicate = std::function<bool(std::size_t, std::size_t)>;
Components label_components(const GridSpec& grid, std::span<const int> key,
                            std::optional<std::uint64_t> scan_seed = std::nullopt,
                            const LinkPredicate& linked = {});

}  // namespace kinsep
