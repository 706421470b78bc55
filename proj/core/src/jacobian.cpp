#include "kinsep/jacobian.hpp"

#include <stdexcept>

namespace kinsep {

JacobianPair JacobianPair::from_blocks(Eigen::MatrixXd a, std::vector<double> b) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != b.size()) {
    throw std::invalid_argument("Jacobian blocks have inconsistent sizes");
  }
  JacobianPair jp;
  jp.det_a = a.determinant();
  jp.det_b = 1.0;
  for (double v : b) jp.det_b *= v;
  jp.a_matrix = std::move(a);
  jp.b_diagonal = std::move(b);
  return jp;
}

}  // namespace kinsep
