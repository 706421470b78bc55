#pragma once

#include <vector>

#include <Eigen/Dense>

namespace kinsep {

/// Parallel Jacobian A (n x n) and the diagonal of the serial Jacobian B.
struct JacobianPair {
  Eigen::MatrixXd a_matrix;
  std::vector<double> b_diagonal;
  double det_a = 0.0;
  double det_b = 0.0;

  /// Fills both determinants from the given blocks.
  static JacobianPair from_blocks(Eigen::MatrixXd a, std::vector<double> b);
};

}  // namespace kinsep
