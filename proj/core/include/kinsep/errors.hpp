#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kinsep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (pose, q) pair handed to a Jacobian routine does not satisfy the constraints.
class ResidualViolation : public Error {
 public:
  ResidualViolation(double residual, double tolerance);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Inverse kinematics in a fixed working mode failed at a trajectory sample.
class BranchLost : public Error {
 public:
  explicit BranchLost(std::size_t sample);
  std::size_t sample() const { return sample_; }

 private:
  std::size_t sample_;
};

}  // namespace kinsep
