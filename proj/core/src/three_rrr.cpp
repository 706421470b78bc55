#include "kinsep/three_rrr.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kinsep/errors.hpp"

namespace kinsep {

ThreeRrrParams reference_3rrr_params() {
  ThreeRrrParams p;
  p.base = {Vec2{-10.0, -10.0}, Vec2{10.0, -10.0}, Vec2{0.0, 10.0}};
  p.platform = {Vec2{0.0, 0.0}, Vec2{10.0, 0.0}, Vec2{10.0, 10.0}};
  p.proximal = {10.0, 10.0, 10.0};
  p.distal = {10.0, 10.0, 10.0};
  return p;
}

namespace {

// Legs 1 and 2 hold the platform on a one-parameter family of poses; for a
// fixed phi the position P solves |P + R(phi) c_i - B_i| = M_i (i = 1, 2), a
// circle-circle intersection with two candidates. The third leg's residual is
// tracked along each candidate branch.
class LegPairSweep {
 public:
  LegPairSweep(const ThreeRrrParams& p, const std::array<Vec2, 3>& pivots) : p_(p), b_(pivots) {}

  struct Sample {
    double hsq = -std::numeric_limits<double>::infinity();
    std::array<double, 2> f{};
    bool alive() const { return hsq >= 0.0; }
  };

  Sample sample(double phi) const {
    Sample s;
    Frame fr;
    if (!frame(phi, fr)) return s;
    s.hsq = fr.hsq;
    if (s.hsq < 0.0) return s;
    for (int b = 0; b < 2; ++b) s.f[static_cast<std::size_t>(b)] = third_residual(fr, b);
    return s;
  }

  double hsq(double phi) const {
    Frame fr;
    return frame(phi, fr) ? fr.hsq : -std::numeric_limits<double>::infinity();
  }

  /// Third-leg residual on `branch`, half-chord clamped at zero.
  double f(double phi, int branch) const {
    Frame fr;
    if (!frame(phi, fr)) return std::numeric_limits<double>::quiet_NaN();
    return third_residual(fr, branch);
  }

  Vec2 position(double phi, int branch) const {
    Frame fr;
    frame(phi, fr);
    return point(fr, branch);
  }

 private:
  struct Frame {
    std::array<Vec2, 3> rc;
    Vec2 foot;
    Vec2 normal;
    double hsq = 0.0;
  };

  bool frame(double phi, Frame& fr) const {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2 v = p_.platform[i];
      fr.rc[i] = {c * v.x - s * v.y, s * v.x + c * v.y};
    }
    const Vec2 p1 = b_[0] - fr.rc[0];
    const Vec2 p2 = b_[1] - fr.rc[1];
    const double r1 = p_.distal[0];
    const double r2 = p_.distal[1];
    const Vec2 span = p2 - p1;
    const double d = norm(span);
    if (d <= 1e-14 * (r1 + r2)) return false;
    fr.hsq = (r1 + r2 + d) * (-r1 + r2 + d) * (r1 - r2 + d) * (r1 + r2 - d) / (4.0 * d * d);
    const Vec2 e = (1.0 / d) * span;
    fr.foot = p1 + ((d * d + r1 * r1 - r2 * r2) / (2.0 * d)) * e;
    fr.normal = perp(e);
    return true;
  }

  static Vec2 point(const Frame& fr, int branch) {
    const double h = std::sqrt(std::max(fr.hsq, 0.0));
    return branch == 0 ? fr.foot + h * fr.normal : fr.foot - h * fr.normal;
  }

  double third_residual(const Frame& fr, int branch) const {
    const Vec2 c3 = point(fr, branch) + fr.rc[2];
    return squared_norm(c3 - b_[2]) - p_.distal[2] * p_.distal[2];
  }

  const ThreeRrrParams& p_;
  std::array<Vec2, 3> b_;
};

template <class F>
double bisect(F&& g, double lo, double hi, double tol) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double golden_minimum(F&& g, double lo, double hi, int iterations = 80) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double ga = g(a);
  double gb = g(b);
  for (int it = 0; it < iterations; ++it) {
    if (ga < gb) {
      hi = b;
      b = a;
      gb = ga;
      a = hi - inv_phi * (hi - lo);
      ga = g(a);
    } else {
      lo = a;
      a = b;
      ga = gb;
      b = lo + inv_phi * (hi - lo);
      gb = g(b);
    }
  }
  return 0.5 * (lo + hi);
}

bool opposite(double a, double b) { return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0); }

}  // namespace

ThreeRrrModel::ThreeRrrModel(const ThreeRrrParams& params, const Fk3Options& fk_options)
    : p_(params), fk_options_(fk_options) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(p_.proximal[i] > 0.0) || !(p_.distal[i] > 0.0) || !std::isfinite(p_.proximal[i]) ||
        !std::isfinite(p_.distal[i])) {
      throw std::invalid_argument("3-RRR link lengths must be positive and finite");
    }
  }
  const double spread = std::max({norm(p_.base[1] - p_.base[0]), norm(p_.base[2] - p_.base[0]),
                                  norm(p_.base[2] - p_.base[1])});
  if (std::abs(cross(p_.base[1] - p_.base[0], p_.base[2] - p_.base[0])) <= 1e-12 * spread * spread) {
    throw std::invalid_argument("3-RRR base anchors must not be collinear");
  }
  if (p_.platform[0] == p_.platform[1] && p_.platform[1] == p_.platform[2]) {
    throw std::invalid_argument("3-RRR platform anchors must not all coincide");
  }
  if (fk_options_.phi_samples < 16 || !(fk_options_.phi_tol > 0.0) ||
      !(fk_options_.dedupe_tol > 0.0) || !(fk_options_.residual_tol > 0.0)) {
    throw std::invalid_argument("invalid 3-RRR forward-kinematics options");
  }
}

double ThreeRrrModel::length_scale() const {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    s = std::max({s, p_.proximal[i] + p_.distal[i], norm(p_.platform[i]), norm(p_.base[i])});
  }
  return s;
}

Vec2 ThreeRrrModel::platform_point(const Pose& pose, int leg) const {
  return Vec2{pose.x(), pose.y()} + rotate(p_.platform[static_cast<std::size_t>(leg)], pose.phi());
}

Vec2 ThreeRrrModel::passive_pivot(int leg, double alpha) const {
  const auto i = static_cast<std::size_t>(leg);
  return p_.base[i] + p_.proximal[i] * unit_vector(alpha);
}

std::vector<bool> ThreeRrrModel::folded_legs_in_box(const PoseBox& box) const {
  // C_i = A_i needs (x, y) = A_i - R(phi) c_i: an arc of radius |c_i| about
  // A_i, tested against the (x, y) rectangle through samples of phi with the
  // rectangle grown by the largest gap between the arc and its samples.
  constexpr int kSteps = 16;
  std::vector<bool> out(3, false);
  bool any = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (p_.proximal[i] != p_.distal[i]) continue;
    any = true;
    const double step = (box.phi_max - box.phi_min) / kSteps;
    const double grow = 0.5 * norm(p_.platform[i]) * std::abs(step);
    for (int k = 0; k <= kSteps && !out[i]; ++k) {
      const Vec2 xy = p_.base[i] - rotate(p_.platform[i], box.phi_min + k * step);
      out[i] = xy.x >= box.x_min - grow && xy.x <= box.x_max + grow && xy.y >= box.y_min - grow && xy.y <= box.y_max + grow;
    }
  }
  if (!any) out.clear();
  return out;
}

Pose ThreeRrrModel::polish(Pose pose, const ActuatedConfig& q) const {
  // Near a tangency of the leg 1 and 2 circles the position moves like the
  // square root of phi, so a bisected phi leaves a residual of order
  // sqrt(phi_tol); a few Newton steps on all three constraints remove it.
  double best = max_abs(residual(pose, q));
  for (int it = 0; it < 6 && best > 0.0; ++it) {
    Eigen::Matrix3d jac;
    Eigen::Vector3d f;
    for (int leg = 0; leg < 3; ++leg) {
      const auto i = static_cast<std::size_t>(leg);
      const Vec2 e = platform_point(pose, leg) - passive_pivot(leg, q[i]);
      const Vec2 turn = perp(rotate(p_.platform[i], pose.phi()));
      f[leg] = squared_norm(e) - p_.distal[i] * p_.distal[i];
      jac(leg, 0) = 2.0 * e.x;
      jac(leg, 1) = 2.0 * e.y;
      jac(leg, 2) = 2.0 * dot(e, turn);
    }
    const Eigen::Vector3d dx = jac.fullPivLu().solve(f);
    if (!dx.allFinite()) break;
    const Pose next(pose.x() - dx[0], pose.y() - dx[1], pose.phi() - dx[2]);
    const double r = max_abs(residual(next, q));
    if (!(r < best)) break;
    pose = next;
    best = r;
  }
  return pose;
}

void ThreeRrrModel::check_config(const ActuatedConfig& q) const {
  if (q.size() != 3) throw std::invalid_argument("3-RRR expects 3 actuated angles");
}

std::vector<double> ThreeRrrModel::residual(const Pose& pose, const ActuatedConfig& q) const {
  check_config(q);
  std::vector<double> out(3);
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    const Vec2 e = platform_point(pose, leg) - passive_pivot(leg, q[i]);
    out[i] = squared_norm(e) - p_.distal[i] * p_.distal[i];
  }
  return out;
}

std::vector<BranchedSolution> ThreeRrrModel::ik(const Pose& pose) const {
  std::array<LegSolution, 3> legs;
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    legs[i] = solve_leg(p_.base[i], platform_point(pose, leg), p_.proximal[i], p_.distal[i]);
  }
  std::vector<BranchedSolution> out;
  for (LegCombination& combo : combine_legs(legs)) {
    BranchedSolution s;
    for (int leg = 0; leg < 3; ++leg) {
      s.passive.push_back(passive_pivot(leg, combo.angles[static_cast<std::size_t>(leg)]));
    }
    s.q = ActuatedConfig(std::move(combo.angles));
    s.mode = std::move(combo.mode);
    s.singular_legs = std::move(combo.singular_legs);
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<BranchedSolution> ThreeRrrModel::ik_mode(const Pose& pose, const SignVector& mode) const {
  if (mode.size() != 3) throw std::invalid_argument("3-RRR working mode needs 3 signs");
  std::vector<double> angles(3);
  BranchedSolution s;
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    const LegSolution sol =
        solve_leg(p_.base[i], platform_point(pose, leg), p_.proximal[i], p_.distal[i]);
    if (sol.count != 2) return std::nullopt;
    angles[i] = sol.angle(mode[i]);
    s.passive.push_back(passive_pivot(leg, angles[i]));
  }
  s.q = ActuatedConfig(std::move(angles));
  s.mode = mode;
  s.singular_legs = {false, false, false};
  return s;
}

std::vector<Assembly> ThreeRrrModel::fk(const ActuatedConfig& q) const {
  check_config(q);
  const std::array<Vec2, 3> pivots{passive_pivot(0, q[0]), passive_pivot(1, q[1]),
                                   passive_pivot(2, q[2])};
  const LegPairSweep sweep(p_, pivots);
  const int n = fk_options_.phi_samples;
  const double step = 2.0 * std::numbers::pi / n;
  const double tol = fk_options_.phi_tol;
  auto phi_at = [&](int k) { return -std::numbers::pi + k * step; };

  // Samples k = -1 .. n; index k + 1 in the vector.
  std::vector<LegPairSweep::Sample> samples(static_cast<std::size_t>(n) + 2);
  for (int k = -1; k <= n; ++k) samples[static_cast<std::size_t>(k + 1)] = sweep.sample(phi_at(k));
  auto at = [&](int k) -> const LegPairSweep::Sample& { return samples[static_cast<std::size_t>(k + 1)]; };

  struct Root {
    double phi;
    int branch;
  };
  std::vector<Root> roots;
  auto refine = [&](int branch, double lo, double hi) {
    const double phi = bisect([&](double t) { return sweep.f(t, branch); }, lo, hi, tol);
    roots.push_back({phi, branch});
  };

  // Where the leg 1 and 2 circles turn tangent the two branches meet and the
  // third residual moves like sqrt(phi - phi_t), so two roots can share one
  // sample interval. Subsample outward from the tangency on a square-root scale.
  auto tangency = [&](double alive, double dead) {
    for (int it = 0; it < 200 && std::abs(dead - alive) > tol; ++it) {
      const double mid = 0.5 * (alive + dead);
      if (sweep.hsq(mid) >= 0.0) alive = mid; else dead = mid;
    }
    return alive;
  };
  auto scan_fold = [&](double tangent, double outer) {
    constexpr int m = 64;
    for (int b = 0; b < 2; ++b) {
      double prev_t = tangent;
      double prev_f = sweep.f(tangent, b);
      for (int j = 1; j <= m; ++j) {
        const double u = static_cast<double>(j) / m;
        const double t = tangent + (outer - tangent) * u * u;
        const double ft = sweep.f(t, b);
        if (opposite(prev_f, ft)) refine(b, std::min(prev_t, t), std::max(prev_t, t));
        prev_t = t;
        prev_f = ft;
      }
    }
  };

  for (int k = 0; k < n; ++k) {
    const auto& s0 = at(k);
    const auto& s1 = at(k + 1);
    const double lo = phi_at(k);
    const double hi = phi_at(k + 1);
    if (s0.alive() && s1.alive()) {
      for (int b = 0; b < 2; ++b) {
        const auto bi = static_cast<std::size_t>(b);
        if (opposite(s0.f[bi], s1.f[bi])) refine(b, lo, hi);
      }
    } else if (s0.alive()) {
      const double t = tangency(lo, hi);
      scan_fold(t, t - 2.0 * step);
    } else if (s1.alive()) {
      const double t = tangency(hi, lo);
      scan_fold(t, t + 2.0 * step);
    }
  }

  // A window where the circles meet can open and close between two samples.
  for (int k = 0; k < n; ++k) {
    const auto& sm = at(k - 1);
    const auto& s0 = at(k);
    const auto& sp = at(k + 1);
    if (sm.alive() || s0.alive() || sp.alive()) continue;
    if (s0.hsq < sm.hsq || s0.hsq < sp.hsq) continue;
    const double lo = phi_at(k - 1);
    const double hi = phi_at(k + 1);
    const double top = golden_minimum([&](double t) { return -sweep.hsq(t); }, lo, hi);
    if (sweep.hsq(top) < 0.0) continue;
    scan_fold(tangency(top, lo), top);
    scan_fold(tangency(top, hi), top);
  }

  // Two roots closer than one sample interval leave no sign change at the
  // samples; look for a local extremum of the residual that crosses zero.
  for (int k = 0; k < n; ++k) {
    const auto& sm = at(k - 1);
    const auto& s0 = at(k);
    const auto& sp = at(k + 1);
    if (!sm.alive() || !s0.alive() || !sp.alive()) continue;
    for (int b = 0; b < 2; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const double sign = s0.f[bi] > 0.0 ? 1.0 : -1.0;
      if (sign * sm.f[bi] <= 0.0 || sign * sp.f[bi] <= 0.0) continue;
      if (std::abs(s0.f[bi]) > std::abs(sm.f[bi]) || std::abs(s0.f[bi]) > std::abs(sp.f[bi])) continue;
      const double lo = phi_at(k - 1);
      const double hi = phi_at(k + 1);
      auto g = [&](double t) { return sign * sweep.f(t, b); };
      const double tmin = golden_minimum(g, lo, hi);
      if (g(tmin) < 0.0) {
        refine(b, lo, tmin);
        refine(b, tmin, hi);
      }
    }
  }

  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.phi < b.phi; });

  std::vector<Assembly> out;
  for (const Root& root : roots) {
    const Vec2 pos = sweep.position(root.phi, root.branch);
    const Pose pose = polish(Pose(pos.x, pos.y, root.phi), q);
    if (max_abs(residual(pose, q)) > fk_options_.residual_tol) continue;
    auto dup = std::find_if(out.begin(), out.end(), [&](const Assembly& a) {
      return pose_distance(a.pose, pose) <= fk_options_.dedupe_tol;
    });
    if (dup != out.end()) continue;  // same root reached from adjacent brackets
    out.push_back({pose, false});
  }
  std::sort(out.begin(), out.end(), [](const Assembly& a, const Assembly& b) {
    if (a.pose.phi() != b.pose.phi()) return a.pose.phi() < b.pose.phi();
    if (a.pose.x() != b.pose.x()) return a.pose.x() < b.pose.x();
    return a.pose.y() < b.pose.y();
  });
  return out;
}

JacobianPair ThreeRrrModel::jacobians(const Pose& pose, const ActuatedConfig& q) const {
  const double worst = max_abs(residual(pose, q));
  if (worst > residual_tol()) throw ResidualViolation(worst, residual_tol());
  Eigen::MatrixXd a(3, 3);
  std::vector<double> b(3);
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    const Vec2 rc = rotate(p_.platform[i], pose.phi());
    const Vec2 ci = Vec2{pose.x(), pose.y()} + rc;
    const Vec2 e = ci - passive_pivot(leg, q[i]);
    a(leg, 0) = 2.0 * e.x;
    a(leg, 1) = 2.0 * e.y;
    a(leg, 2) = 2.0 * cross(rc, e);
    const Vec2 d = ci - p_.base[i];
    b[i] = 2.0 * p_.proximal[i] * (std::sin(q[i]) * d.x - std::cos(q[i]) * d.y);
  }
  return JacobianPair::from_blocks(std::move(a), std::move(b));
}

std::array<SingularityCircle, 6> ThreeRrrModel::serial_singularity_curves() const {
  std::array<SingularityCircle, 6> out;
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    out[2 * i] = {leg, p_.base[i], p_.proximal[i] + p_.distal[i], true};
    out[2 * i + 1] = {leg, p_.base[i], std::abs(p_.proximal[i] - p_.distal[i]), false};
  }
  return out;
}

std::array<bool, 3> ThreeRrrModel::serial_singular_legs(const Pose& pose, double tol) const {
  std::array<bool, 3> out{};
  for (int leg = 0; leg < 3; ++leg) {
    const auto i = static_cast<std::size_t>(leg);
    const double r = norm(platform_point(pose, leg) - p_.base[i]);
    out[i] = std::abs(r - (p_.proximal[i] + p_.distal[i])) <= tol ||
             std::abs(r - std::abs(p_.proximal[i] - p_.distal[i])) <= tol;
  }
  return out;
}

}  // namespace kinsep
