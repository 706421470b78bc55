#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kinsep {

/// Platform configuration. `phi` is ignored by 2-DOF models and kept at 0 there.
class Pose {
 public:
  Pose() = default;
  Pose(double x, double y, double phi = 0.0);

  double x() const { return x_; }
  double y() const { return y_; }
  double phi() const { return phi_; }

  friend bool operator==(const Pose&, const Pose&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double phi_ = 0.0;
};

/// Axis-aligned box of poses; phi bounds are not wrapped.
struct PoseBox {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double phi_min = 0.0, phi_max = 0.0;
};

/// Chebyshev-style pose distance max(|dx|, |dy|, phi_weight * |dphi|), dphi wrapped.
double pose_distance(const Pose& a, const Pose& b, double phi_weight = 10.0);

/// Actuated joint angles, each normalized to (-pi, pi].
class ActuatedConfig {
 public:
  ActuatedConfig() = default;
  explicit ActuatedConfig(std::vector<double> angles);
  ActuatedConfig(std::initializer_list<double> angles)
      : ActuatedConfig(std::vector<double>(angles)) {}

  std::size_t size() const { return angles_.size(); }
  double operator[](std::size_t i) const { return angles_[i]; }
  std::span<const double> angles() const { return angles_; }

  friend bool operator==(const ActuatedConfig&, const ActuatedConfig&) = default;

 private:
  std::vector<double> angles_;
};

/// Largest wrapped per-joint difference. Sizes must match.
double config_distance(const ActuatedConfig& a, const ActuatedConfig& b);

}  // namespace kinsep
