#include "tadv/linalg.hpp"

#include "tadv/errors.hpp"

namespace tadv {

PinvResult pinv_truncated(const Eigen::MatrixXd& A, double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0) {
    throw ContractViolation("pinv_truncated: empty matrix");
  }
  if (!A.allFinite()) {
    throw ContractViolation("pinv_truncated: non-finite entries");
  }
  if (rel_tol < 0.0) {
    throw ContractViolation("pinv_truncated: negative tolerance");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();

  PinvResult out;
  out.sigma_max = s(0);
  out.sigma_min = s(s.size() - 1);

  const double cutoff = rel_tol * out.sigma_max;
  Eigen::VectorXd sinv = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > 0.0 && s(i) >= cutoff) {
      sinv(i) = 1.0 / s(i);
      ++out.rank;
    }
  }

  out.pinv = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

}  // namespace tadv
