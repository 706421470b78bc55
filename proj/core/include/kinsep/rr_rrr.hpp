#pragma once

#include <array>

#include "kinsep/leg.hpp"
#include "kinsep/manipulator.hpp"

namespace kinsep {

/// Dimensions of the RR-RRR five-bar: proximal links l1 (leg 1) and l2 (leg 2),
/// distal links l3 (B1C) and l4 (B2C), motor axes A1 = (c1, 0), A2 = (c2, 0).
struct RrRrrParams {
  double l1 = 8.0;
  double l2 = 5.0;
  double l3 = 5.0;
  double l4 = 8.0;
  double c1 = 0.0;
  double c2 = 9.0;
};

/// Planar 2-DOF five-bar with the end effector at the common pivot C.
///
/// Constraint of leg i: |C - B_i|^2 = distal_i^2. The Jacobians are the
/// gradients of half of that expression, so row i of A is C - B_i and
/// B_ii = proximal_i (sin(theta_i) (C - B_i).x - cos(theta_i) (C - B_i).y).
class RrRrrModel final : public Manipulator {
 public:
  /// Throws std::invalid_argument on non-positive lengths or c1 == c2.
  explicit RrRrrModel(const RrRrrParams& params = {});

  const RrRrrParams& params() const { return p_; }
  Vec2 anchor(int leg) const;
  double proximal(int leg) const { return leg == 0 ? p_.l1 : p_.l2; }
  double distal(int leg) const { return leg == 0 ? p_.l3 : p_.l4; }
  Vec2 passive_pivot(int leg, double theta) const;

  std::string_view name() const override { return "rr_rrr"; }
  int dof() const override { return 2; }
  double length_scale() const override;
  std::vector<bool> folded_legs_in_box(const PoseBox& box) const override;

  std::vector<double> residual(const Pose& pose, const ActuatedConfig& q) const override;
  std::vector<BranchedSolution> ik(const Pose& pose) const override;
  std::optional<BranchedSolution> ik_mode(const Pose& pose, const SignVector& mode) const override;
  /// Circle intersection about B1 and B2; 0, 1 (tangent, flagged) or 2
  /// solutions, the one left of B1->B2 first.
  std::vector<Assembly> fk(const ActuatedConfig& q) const override;
  JacobianPair jacobians(const Pose& pose, const ActuatedConfig& q) const override;

  /// Outer and inner reach circles of leg 1 then leg 2.
  std::array<SingularityCircle, 4> serial_singularity_curves() const;

 private:
  void check_config(const ActuatedConfig& q) const;

  RrRrrParams p_;
};

}  // namespace kinsep
