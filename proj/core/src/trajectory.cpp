#include "kinsep/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kinsep/detail/parallel.hpp"
#include "kinsep/errors.hpp"

namespace kinsep {

void Waypath::validate() const {
  if (waypoints.size() < 2) throw std::invalid_argument("Waypath: at least 2 waypoints required");
  if (samples_per_segment < 16) throw std::invalid_argument("Waypath: at least 16 samples per segment required");
}

std::vector<Pose> interpolate(const Waypath& path) {
  path.validate();
  const int s = path.samples_per_segment;
  std::vector<Pose> out;
  out.reserve((path.waypoints.size() - 1) * static_cast<std::size_t>(s) + 1);
  out.push_back(path.waypoints.front());
  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const Pose& a = path.waypoints[seg];
    const Pose& b = path.waypoints[seg + 1];
    for (int k = 1; k <= s; ++k) {
      const double u = static_cast<double>(k) / s;
      const double v = static_cast<double>(s - k) / s;
      out.emplace_back(v * a.x() + u * b.x(), v * a.y() + u * b.y(), v * a.phi() + u * b.phi());
    }
  }
  return out;
}

std::string DeterminantTrace::series_name(std::size_t s) {
  if (s == 0) return "det_a";
  return "b" + std::to_string(s) + std::to_string(s);
}

DeterminantTrace trace(const Manipulator& model, const Waypath& path, const SignVector& mode, unsigned threads) {
  const auto poses = interpolate(path);
  const std::size_t n = poses.size();
  std::vector<std::optional<BranchedSolution>> sols(n);
  std::vector<JacobianPair> jps(n);
  detail::parallel_for(n, threads, [&](std::size_t k) {
    sols[k] = model.ik_mode(poses[k], mode);
    if (sols[k]) jps[k] = model.jacobians(poses[k], sols[k]->q);
  });
  for (std::size_t k = 0; k < n; ++k) {
    if (!sols[k]) throw BranchLost(k);
  }

  DeterminantTrace t;
  t.mode = mode;
  t.poses = poses;
  const std::size_t m = 1 + mode.size();
  t.series.assign(m, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    t.q.push_back(sols[k]->q);
    t.series[0][k] = jps[k].det_a;
    for (std::size_t j = 0; j < mode.size(); ++j) t.series[1 + j][k] = jps[k].b_diagonal[j];
  }
  for (const auto& s : t.series) {
    double peak = 0.0;
    for (double v : s) peak = std::max(peak, std::abs(v));
    // An identically zero series keeps unit scale.
    const double scale = peak > 0.0 ? peak : 1.0;
    t.scale.push_back(scale);
    std::vector<double> norm(s.size());
    std::transform(s.begin(), s.end(), norm.begin(), [scale](double v) { return v / scale; });
    t.normalized.push_back(std::move(norm));
  }
  return t;
}

std::optional<Violation> verify_nonsingular(const DeterminantTrace& trace, double zero_tol) {
  for (std::size_t k = 0; k < trace.samples(); ++k) {
    for (std::size_t s = 0; s < trace.series.size(); ++s) {
      const double v = trace.series[s][k];
      if (std::abs(v) <= zero_tol) return Violation{k, s};
      if (k > 0 && std::signbit(v) != std::signbit(trace.series[s][k - 1])) return Violation{k, s};
    }
  }
  return std::nullopt;
}

namespace {

double nearest_gap(const std::vector<Assembly>& sols, const Pose& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : sols) best = std::min(best, pose_distance(a.pose, p));
  return best;
}

// Newton iteration on X -> ik_mode(X) toward q_target, from `start`.
std::optional<Pose> carry_to(const Manipulator& model, const SignVector& mode, Pose x, const ActuatedConfig& q_target) {
  const std::size_t n = mode.size();
  for (int it = 0; it < 20; ++it) {
    const auto sol = model.ik_mode(x, mode);
    if (!sol) return std::nullopt;
    if (config_distance(sol->q, q_target) <= 1e-14) return x;
    const JacobianPair jp = model.jacobians(x, sol->q);
    Eigen::VectorXd bdq(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      bdq(static_cast<Eigen::Index>(j)) =
          jp.b_diagonal[j] * std::remainder(q_target[j] - sol->q[j], 2.0 * std::numbers::pi);
    }
    const Eigen::VectorXd dx = -jp.a_matrix.fullPivLu().solve(bdq);
    x = Pose(x.x() + dx(0), x.y() + dx(1), n == 3 ? x.phi() + dx(2) : x.phi());
  }
  const auto sol = model.ik_mode(x, mode);
  if (!sol || config_distance(sol->q, q_target) > 1e-10) return std::nullopt;
  return x;
}

}  // namespace

AssemblyModeReport verify_assembly_mode_change(const Manipulator& model, const Waypath& path,
                                               const SignVector& mode, const AssemblyModeOptions& options) {
  const DeterminantTrace t = trace(model, path, mode, options.threads);
  if (const auto v = verify_nonsingular(t, options.zero_tol)) {
    throw Error("path meets a singularity at sample " + std::to_string(v->sample) + " (" +
                DeterminantTrace::series_name(v->series) + ")");
  }
  AssemblyModeReport r;
  r.mode = mode;
  r.start = t.poses.front();
  r.end = t.poses.back();
  r.q_start = t.q.front();
  r.q_end = t.q.back();
  r.q_distance = config_distance(r.q_start, r.q_end);
  r.pose_gap = pose_distance(r.start, r.end);
  const auto sols = model.fk(r.q_start);
  r.fk_count = sols.size();
  r.start_fk_gap = nearest_gap(sols, r.start);
  r.end_fk_gap = nearest_gap(sols, r.end);

  const auto carried = carry_to(model, mode, r.end, r.q_start);
  r.end_fk_gap_carried = carried ? nearest_gap(sols, *carried) : std::numeric_limits<double>::infinity();
  r.carried_to_start = carried ? pose_distance(*carried, r.start) : std::numeric_limits<double>::infinity();

  r.distinct_poses = r.pose_gap > options.distinct_tol;
  r.both_in_fk = r.start_fk_gap <= options.membership_tol && r.end_fk_gap_carried <= options.membership_tol;
  r.mode_change = r.both_in_fk && r.carried_to_start > options.distinct_tol;
  r.det_sign = t.series[0].front() < 0.0 ? Sign::Minus : Sign::Plus;
  return r;
}

std::vector<ModeOutcome> discover_modes(const Manipulator& model, const Waypath& path, double zero_tol,
                                        unsigned threads) {
  std::vector<ModeOutcome> out;
  for (const auto& mode : enumerate_working_modes(model.dof())) {
    ModeOutcome o;
    o.mode = mode;
    try {
      o.violation = verify_nonsingular(trace(model, path, mode, threads), zero_tol);
    } catch (const BranchLost& e) {
      o.branch_lost = e.sample();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace kinsep
