#pragma once

#include <Eigen/Dense>

namespace tadv {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// External wrench: force (N) stacked over moment (N m), expressed in the
// world frame at the link frame origin.
using Wrench = Vector6d;

}  // namespace tadv
