#pragma once

#include <array>

#include "kinsep/leg.hpp"
#include "kinsep/manipulator.hpp"

namespace kinsep {

/// Base anchors A_i (fixed frame), platform anchors C_i (mobile frame),
/// proximal lengths L_i and distal lengths M_i.
struct ThreeRrrParams {
  std::array<Vec2, 3> base;
  std::array<Vec2, 3> platform;
  std::array<double, 3> proximal{};
  std::array<double, 3> distal{};
};

/// Dimensions used throughout the 3-RRR examples and tests.
ThreeRrrParams reference_3rrr_params();

struct Fk3Options {
  int phi_samples = 2048;       ///< uniform sweep of (-pi, pi]
  double phi_tol = 1e-12;       ///< bisection width on phi
  double dedupe_tol = 1e-6;     ///< in max(|dx|, |dy|, 10 |dphi|)
  double residual_tol = 1e-8;
};

/// Planar 3-DOF manipulator with three RRR legs, first joint actuated.
///
/// Leg constraint: |C_i(X) - A_i - L_i u(alpha_i)|^2 = M_i^2 with
/// C_i(X) = (x, y) + R(phi) c_i. A holds the partials with respect to
/// (x, y, phi) and B_ii = 2 L_i (sin(alpha_i) d.x - cos(alpha_i) d.y) with
/// d = C_i(X) - A_i, the exact partial with respect to alpha_i.
class ThreeRrrModel final : public Manipulator {
 public:
  /// Throws std::invalid_argument on invalid dimensions.
  explicit ThreeRrrModel(const ThreeRrrParams& params = reference_3rrr_params(),
                         const Fk3Options& fk_options = {});

  const ThreeRrrParams& params() const { return p_; }
  const Fk3Options& fk_options() const { return fk_options_; }
  Vec2 platform_point(const Pose& pose, int leg) const;
  Vec2 passive_pivot(int leg, double alpha) const;

  std::string_view name() const override { return "3rrr"; }
  int dof() const override { return 3; }
  double length_scale() const override;
  std::vector<bool> folded_legs_in_box(const PoseBox& box) const override;
  double residual_tol() const override { return 1e-8; }

  std::vector<double> residual(const Pose& pose, const ActuatedConfig& q) const override;
  std::vector<BranchedSolution> ik(const Pose& pose) const override;
  std::optional<BranchedSolution> ik_mode(const Pose& pose, const SignVector& mode) const override;
  /// All assemblies with |B_i C_i| = M_i, sorted by ascending phi.
  std::vector<Assembly> fk(const ActuatedConfig& q) const override;
  JacobianPair jacobians(const Pose& pose, const ActuatedConfig& q) const override;

  /// Reach circles of each platform point C_i about A_i (outer then inner per leg).
  std::array<SingularityCircle, 6> serial_singularity_curves() const;
  /// Per leg: true when C_i(pose) lies within `tol` of a reach circle.
  std::array<bool, 3> serial_singular_legs(const Pose& pose, double tol = 1e-9) const;

 private:
  void check_config(const ActuatedConfig& q) const;
  Pose polish(Pose pose, const ActuatedConfig& q) const;

  ThreeRrrParams p_;
  Fk3Options fk_options_;
};

}  // namespace kinsep
