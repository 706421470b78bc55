#include "kinsep/pose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kinsep/errors.hpp"
#include "kinsep/geometry.hpp"
#include "kinsep/manipulator.hpp"

namespace kinsep {

Pose::Pose(double x, double y, double phi) : x_(x), y_(y), phi_(normalize_angle(phi)) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(phi)) {
    throw std::invalid_argument("pose coordinates must be finite");
  }
}

double pose_distance(const Pose& a, const Pose& b, double phi_weight) {
  return std::max({std::abs(a.x() - b.x()), std::abs(a.y() - b.y()),
                   phi_weight * angle_distance(a.phi(), b.phi())});
}

ActuatedConfig::ActuatedConfig(std::vector<double> angles) : angles_(std::move(angles)) {
  for (double& a : angles_) {
    if (!std::isfinite(a)) throw std::invalid_argument("joint angles must be finite");
    a = normalize_angle(a);
  }
}

double config_distance(const ActuatedConfig& a, const ActuatedConfig& b) {
  if (a.size() != b.size()) throw std::invalid_argument("config sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, angle_distance(a[i], b[i]));
  return d;
}

bool BranchedSolution::singular() const {
  return std::any_of(singular_legs.begin(), singular_legs.end(), [](bool s) { return s; });
}

std::vector<bool> Manipulator::folded_legs_in_box(const PoseBox&) const { return {}; }

double max_abs(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

ResidualViolation::ResidualViolation(double residual, double tolerance)
    : Error("constraint residual " + std::to_string(residual) + " exceeds tolerance " +
            std::to_string(tolerance)),
      residual_(residual) {}

BranchLost::BranchLost(std::size_t sample)
    : Error("working-mode branch lost at sample " + std::to_string(sample)), sample_(sample) {}

}  // namespace kinsep
