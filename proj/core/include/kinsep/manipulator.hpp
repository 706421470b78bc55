#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kinsep/geometry.hpp"
#include "kinsep/jacobian.hpp"
#include "kinsep/pose.hpp"
#include "kinsep/sign.hpp"

namespace kinsep {

/// One inverse-kinematics solution tagged with its working mode.
///
/// A leg sitting on a double root (serial singularity) has no sign; it is
/// recorded as Plus in `mode` and flagged in `singular_legs`.
struct BranchedSolution {
  ActuatedConfig q;
  std::vector<Vec2> passive;  ///< B_i, the distal end of each proximal link
  SignVector mode;
  std::vector<bool> singular_legs;

  bool singular() const;
};

/// One direct-kinematics solution. `singular` marks a merged double root.
struct Assembly {
  Pose pose;
  bool singular = false;
};

/// Common contract of the fully parallel planar mechanisms.
///
/// Each leg contributes one constraint F_i(X, q_i) = 0 and one serial term
/// B_ii = dF_i/dq_i; the parallel Jacobian A holds dF_i/dX. Implementations
/// are immutable and safe to share between threads.
class Manipulator {
 public:
  virtual ~Manipulator() = default;

  virtual std::string_view name() const = 0;
  virtual int dof() const = 0;

  /// Per-leg constraint residuals (squared-distance form).
  virtual std::vector<double> residual(const Pose& pose, const ActuatedConfig& q) const = 0;

  /// All solutions, ordered by working-mode index.
  virtual std::vector<BranchedSolution> ik(const Pose& pose) const = 0;

  /// The solution of one working mode, or nothing when that branch is
  /// unreachable or sits on a serial singularity.
  virtual std::optional<BranchedSolution> ik_mode(const Pose& pose, const SignVector& mode) const = 0;

  virtual std::vector<Assembly> fk(const ActuatedConfig& q) const = 0;

  /// Throws ResidualViolation when (pose, q) is not an assembly.
  virtual JacobianPair jacobians(const Pose& pose, const ActuatedConfig& q) const = 0;

  /// Bound on max |residual| accepted by `jacobians`.
  virtual double residual_tol() const { return 1e-9; }

  /// Characteristic length used to scale tolerances.
  virtual double length_scale() const = 0;

  /// Per leg, whether some pose in the box folds the leg onto its
  /// base pivot while proximal and distal lengths are equal. That serial
  /// singularity is a point of the leg's reach (a curve in a 3-DOF
  /// workspace): no sign changes around it and no cell center hits it, so
  /// samplers ask for it per cell. Empty when no leg has equal lengths.
  virtual std::vector<bool> folded_legs_in_box(const PoseBox& box) const;
};

double max_abs(const std::vector<double>& values);

}  // namespace kinsep
