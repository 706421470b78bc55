#include "kinsep/rr_rrr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinsep/errors.hpp"
#include "kinsep/leg.hpp"

namespace kinsep {

RrRrrModel::RrRrrModel(const RrRrrParams& params) : p_(params) {
  for (double len : {p_.l1, p_.l2, p_.l3, p_.l4}) {
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw std::invalid_argument("RR-RRR link lengths must be positive and finite");
    }
  }
  if (!std::isfinite(p_.c1) || !std::isfinite(p_.c2) || p_.c1 == p_.c2) {
    throw std::invalid_argument("RR-RRR motor axes must be finite and distinct");
  }
}

Vec2 RrRrrModel::anchor(int leg) const { return {leg == 0 ? p_.c1 : p_.c2, 0.0}; }

Vec2 RrRrrModel::passive_pivot(int leg, double theta) const {
  return anchor(leg) + proximal(leg) * unit_vector(theta);
}

double RrRrrModel::length_scale() const {
  return std::max({p_.l1 + p_.l3, p_.l2 + p_.l4, std::abs(p_.c2 - p_.c1)});
}

std::vector<bool> RrRrrModel::folded_legs_in_box(const PoseBox& box) const {
  std::vector<bool> out(2, false);
  bool any = false;
  for (int leg = 0; leg < 2; ++leg) {
    if (proximal(leg) != distal(leg)) continue;
    const Vec2 a = anchor(leg);
    out[static_cast<std::size_t>(leg)] = a.x >= box.x_min && a.x <= box.x_max && a.y >= box.y_min && a.y <= box.y_max;
    any = true;
  }
  if (!any) out.clear();
  return out;
}

void RrRrrModel::check_config(const ActuatedConfig& q) const {
  if (q.size() != 2) throw std::invalid_argument("RR-RRR expects 2 actuated angles");
}

std::vector<double> RrRrrModel::residual(const Pose& pose, const ActuatedConfig& q) const {
  check_config(q);
  const Vec2 c{pose.x(), pose.y()};
  std::vector<double> out(2);
  for (int leg = 0; leg < 2; ++leg) {
    const Vec2 e = c - passive_pivot(leg, q[static_cast<std::size_t>(leg)]);
    out[static_cast<std::size_t>(leg)] = squared_norm(e) - distal(leg) * distal(leg);
  }
  return out;
}

std::vector<BranchedSolution> RrRrrModel::ik(const Pose& pose) const {
  const Vec2 c{pose.x(), pose.y()};
  const std::array<LegSolution, 2> legs{solve_leg(anchor(0), c, p_.l1, p_.l3),
                                        solve_leg(anchor(1), c, p_.l2, p_.l4)};
  std::vector<BranchedSolution> out;
  for (LegCombination& combo : combine_legs(legs)) {
    BranchedSolution s;
    s.passive = {passive_pivot(0, combo.angles[0]), passive_pivot(1, combo.angles[1])};
    s.q = ActuatedConfig(std::move(combo.angles));
    s.mode = std::move(combo.mode);
    s.singular_legs = std::move(combo.singular_legs);
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<BranchedSolution> RrRrrModel::ik_mode(const Pose& pose, const SignVector& mode) const {
  if (mode.size() != 2) throw std::invalid_argument("RR-RRR working mode needs 2 signs");
  const Vec2 c{pose.x(), pose.y()};
  const std::array<LegSolution, 2> legs{solve_leg(anchor(0), c, p_.l1, p_.l3),
                                        solve_leg(anchor(1), c, p_.l2, p_.l4)};
  if (legs[0].count != 2 || legs[1].count != 2) return std::nullopt;
  BranchedSolution s;
  const double t1 = legs[0].angle(mode[0]);
  const double t2 = legs[1].angle(mode[1]);
  s.q = ActuatedConfig{t1, t2};
  s.passive = {passive_pivot(0, t1), passive_pivot(1, t2)};
  s.mode = mode;
  s.singular_legs = {false, false};
  return s;
}

std::vector<Assembly> RrRrrModel::fk(const ActuatedConfig& q) const {
  check_config(q);
  const Vec2 b1 = passive_pivot(0, q[0]);
  const Vec2 b2 = passive_pivot(1, q[1]);
  const double r1 = p_.l3;
  const double r2 = p_.l4;
  const Vec2 span = b2 - b1;
  const double d = norm(span);
  if (d <= 1e-12 * (r1 + r2)) return {};

  // Squared half-chord, Heron form.
  const double hsq = (r1 + r2 + d) * (-r1 + r2 + d) * (r1 - r2 + d) * (r1 + r2 - d) / (4.0 * d * d);
  const double band = kDoubleRootTol * (r1 + r2) * (r1 + r2);
  if (hsq < -band) return {};

  const Vec2 e = (1.0 / d) * span;
  const double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const Vec2 foot = b1 + along * e;
  if (hsq <= band) return {Assembly{Pose(foot.x, foot.y), true}};

  const double h = std::sqrt(hsq);
  const Vec2 left = foot + h * perp(e);
  const Vec2 right = foot - h * perp(e);
  return {Assembly{Pose(left.x, left.y), false}, Assembly{Pose(right.x, right.y), false}};
}

JacobianPair RrRrrModel::jacobians(const Pose& pose, const ActuatedConfig& q) const {
  const double worst = max_abs(residual(pose, q));
  if (worst > residual_tol()) throw ResidualViolation(worst, residual_tol());
  const Vec2 c{pose.x(), pose.y()};
  Eigen::MatrixXd a(2, 2);
  std::vector<double> b(2);
  for (int leg = 0; leg < 2; ++leg) {
    const double theta = q[static_cast<std::size_t>(leg)];
    const Vec2 e = c - passive_pivot(leg, theta);
    a(leg, 0) = e.x;
    a(leg, 1) = e.y;
    b[static_cast<std::size_t>(leg)] = proximal(leg) * (std::sin(theta) * e.x - std::cos(theta) * e.y);
  }
  return JacobianPair::from_blocks(std::move(a), std::move(b));
}

std::array<SingularityCircle, 4> RrRrrModel::serial_singularity_curves() const {
  return {SingularityCircle{0, anchor(0), p_.l1 + p_.l3, true},
          SingularityCircle{0, anchor(0), std::abs(p_.l1 - p_.l3), false},
          SingularityCircle{1, anchor(1), p_.l2 + p_.l4, true},
          SingularityCircle{1, anchor(1), std::abs(p_.l2 - p_.l4), false}};
}

}  // namespace kinsep
