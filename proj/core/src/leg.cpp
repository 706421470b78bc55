#include "kinsep/leg.hpp"

#include <cmath>

namespace kinsep {

LegSolution solve_leg(Vec2 anchor, Vec2 target, double proximal, double distal) {
  const Vec2 d = target - anchor;
  const double r = norm(d);
  const double reach = proximal + distal;
  LegSolution out;
  if (r <= 1e-12 * reach) return out;  // unreachable, or a continuum when proximal == distal

  // r^2 - k^2 in Heron form, where k = (r^2 + proximal^2 - distal^2) / (2 proximal)
  // is the projection of d on the proximal link direction.
  const double disc = (reach - r) * (distal - proximal + r) * (r + proximal - distal) *
                      (r + reach) / (4.0 * proximal * proximal);
  const double k = (r * r + proximal * proximal - distal * distal) / (2.0 * proximal);
  const double psi = std::atan2(d.y, d.x);
  const double band = kDoubleRootTol * reach * reach;

  if (disc < -band) return out;
  if (disc <= band) {
    out.count = 1;
    out.plus = out.minus = normalize_angle(k >= 0.0 ? psi : psi + std::numbers::pi);
    return out;
  }
  const double delta = std::atan2(std::sqrt(disc), k);
  out.count = 2;
  out.plus = normalize_angle(psi + delta);
  out.minus = normalize_angle(psi - delta);
  return out;
}

double leg_serial_term(Vec2 anchor, Vec2 target, double proximal, double theta) {
  const Vec2 d = target - anchor;
  return proximal * (std::sin(theta) * d.x - std::cos(theta) * d.y);
}

std::vector<LegCombination> combine_legs(std::span<const LegSolution> legs) {
  std::vector<LegCombination> out;
  for (const LegSolution& leg : legs) {
    if (leg.count == 0) return out;
  }
  const int n = static_cast<int>(legs.size());
  for (const SignVector& mode : enumerate_working_modes(n)) {
    LegCombination combo;
    combo.angles.reserve(legs.size());
    combo.singular_legs.reserve(legs.size());
    bool keep = true;
    for (std::size_t j = 0; j < legs.size(); ++j) {
      if (legs[j].double_root() && mode[j] == Sign::Minus) {
        keep = false;
        break;
      }
      combo.angles.push_back(legs[j].angle(mode[j]));
      combo.singular_legs.push_back(legs[j].double_root());
    }
    if (!keep) continue;
    combo.mode = mode;
    out.push_back(std::move(combo));
  }
  return out;
}

}  // namespace kinsep
