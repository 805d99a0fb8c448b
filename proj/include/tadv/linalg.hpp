#pragma once

#include <Eigen/Dense>

namespace tadv {

struct PinvResult {
  Eigen::MatrixXd pinv;
  int rank = 0;        // singular values kept after truncation
  double sigma_min = 0.0;  // smallest singular value before truncation
  double sigma_max = 0.0;
};

// Moore-Penrose pseudoinverse via SVD. Singular values below
// rel_tol * sigma_max are truncated to zero instead of inverted, which keeps
// the result bounded and deterministic near singular configurations.
PinvResult pinv_truncated(const Eigen::MatrixXd& A, double rel_tol);

}  // namespace tadv
