#pragma once

#include <span>
#include <vector>

#include "kinsep/geometry.hpp"
#include "kinsep/sign.hpp"

namespace kinsep {

/// Solutions of the two-link reachability problem
/// |target - anchor - proximal * u(theta)| = distal.
///
/// Writing d = target - anchor = r * u(psi), the serial term of the leg is
/// proximal * r * sin(theta - psi), so the branch psi + delta is the Plus
/// branch and psi - delta the Minus branch.
struct LegSolution {
  int count = 0;  ///< 0 (unreachable), 1 (double root) or 2
  double plus = 0.0;
  double minus = 0.0;

  bool double_root() const { return count == 1; }
  double angle(Sign s) const { return s == Sign::Plus ? plus : minus; }
};

/// Circle on which a leg's distal point sits when the leg is fully stretched or folded.
struct SingularityCircle {
  int leg = 0;
  Vec2 center;
  double radius = 0.0;
  bool outer = false;
};

/// Relative width of the band around a zero discriminant treated as a double root.
inline constexpr double kDoubleRootTol = 1e-14;

LegSolution solve_leg(Vec2 anchor, Vec2 target, double proximal, double distal);

/// proximal * (sin(theta) * d.x - cos(theta) * d.y) with d = target - anchor.
double leg_serial_term(Vec2 anchor, Vec2 target, double proximal, double theta);

/// Angle combination of an IK solution before it is turned into a model-specific result.
struct LegCombination {
  std::vector<double> angles;
  SignVector mode;
  std::vector<bool> singular_legs;
};

/// Cross product of per-leg branches ordered by working-mode index. A double
/// root contributes once, as Plus, flagged singular. Empty if any leg has none.
std::vector<LegCombination> combine_legs(std::span<const LegSolution> legs);

}  // namespace kinsep
