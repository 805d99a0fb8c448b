#pragma once

// Reference implementations used by the tests only. Everything here is
// recomputed from scratch (forward kinematics, energies, finite differences)
// so the library's analytic dynamics are checked against an independent path.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tadv/dynamics.hpp"

namespace oracle {

inline Eigen::Vector3d in_plane(double theta) {
  return {std::cos(theta), 0.0, std::sin(theta)};
}

// CoM of planar link `link` (0-based), straight from the joint angles.
inline Eigen::Vector3d planar_com(const tadv::RobotModel& m,
                                  const Eigen::VectorXd& q, int link) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double theta = 0.0;
  for (int i = 0; i < link; ++i) {
    theta += q(i);
    p += m.lengths[i] * in_plane(theta);
  }
  theta += q(link);
  return p + 0.5 * m.lengths[link] * in_plane(theta);
}

inline Eigen::Vector3d planar_tip(const tadv::RobotModel& m,
                                  const Eigen::VectorXd& q, int link) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double theta = 0.0;
  for (int i = 0; i <= link; ++i) {
    theta += q(i);
    p += m.lengths[i] * in_plane(theta);
  }
  return p;
}

// Kinetic energy with CoM velocities taken by central differencing the
// positions along the motion direction. The angular rates are exact sums.
inline double kinetic(const tadv::RobotModel& m, const Eigen::VectorXd& q,
                      const Eigen::VectorXd& nu) {
  if (m.kind == tadv::ModelKind::CartesianMass) {
    double t = 0.5 * m.masses[0] * nu.head<3>().squaredNorm();
    for (int i = 0; i < 3; ++i) t += 0.5 * m.inertias[i] * nu(3 + i) * nu(3 + i);
    return t;
  }
  const double eps = 1e-5;
  double t = 0.0;
  double rate = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v =
        (planar_com(m, q + eps * nu, i) - planar_com(m, q - eps * nu, i)) /
        (2.0 * eps);
    rate += nu(i);
    t += 0.5 * m.masses[i] * v.squaredNorm() + 0.5 * m.inertias[i] * rate * rate;
  }
  return t;
}

inline double potential(const tadv::RobotModel& m, const Eigen::VectorXd& q) {
  if (m.kind == tadv::ModelKind::CartesianMass) {
    return m.masses[0] * m.gravity * q(2);
  }
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    v += m.masses[i] * m.gravity * planar_com(m, q, i)(2);
  }
  return v;
}

// Mass matrix by polarization of the kinetic quadratic form:
// M_jk = T(e_j + e_k) - T(e_j) - T(e_k).
inline Eigen::MatrixXd mass_matrix(const tadv::RobotModel& m,
                                   const Eigen::VectorXd& q) {
  const int n = m.dim();
  Eigen::MatrixXd M(n, n);
  std::vector<double> Tii(n);
  for (int j = 0; j < n; ++j) {
    Tii[j] = kinetic(m, q, Eigen::VectorXd::Unit(n, j));
    M(j, j) = 2.0 * Tii[j];
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double Tjk = kinetic(
          m, q, Eigen::VectorXd::Unit(n, j) + Eigen::VectorXd::Unit(n, k));
      M(j, k) = Tjk - Tii[j] - Tii[k];
      M(k, j) = M(j, k);
    }
  }
  return M;
}

// Bias h = C nu + G from the Lagrangian along the zero-acceleration motion
// q(t) = q + t nu:  h = d/dt (dT/dnu) - dT/dq + dV/dq.
//
// dT/dnu uses a wide central step: T is exactly quadratic in nu, so the
// difference quotient has no truncation error and the wide step suppresses
// roundoff. The outer time and configuration derivatives use 4th order
// central stencils.
inline Eigen::VectorXd bias(const tadv::RobotModel& m, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& nu) {
  const int n = m.dim();
  const double d1 = 0.1;
  const double d2 = 1e-2;

  const auto momentum = [&](const Eigen::VectorXd& qq) {
    Eigen::VectorXd p(n);
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
      p(j) = (kinetic(m, qq, nu + d1 * e) - kinetic(m, qq, nu - d1 * e)) /
             (2.0 * d1);
    }
    return p;
  };

  const Eigen::VectorXd dp_dt =
      (-momentum(q + 2.0 * d2 * nu) + 8.0 * momentum(q + d2 * nu) -
       8.0 * momentum(q - d2 * nu) + momentum(q - 2.0 * d2 * nu)) /
      (12.0 * d2);

  Eigen::VectorXd dT_dq(n);
  Eigen::VectorXd G(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
    dT_dq(j) = (-kinetic(m, q + 2.0 * d2 * e, nu) +
                8.0 * kinetic(m, q + d2 * e, nu) -
                8.0 * kinetic(m, q - d2 * e, nu) +
                kinetic(m, q - 2.0 * d2 * e, nu)) /
               (12.0 * d2);
    const double dg = 1e-5;
    G(j) = (potential(m, q + dg * e) - potential(m, q - dg * e)) / (2.0 * dg);
  }
  return dp_dt - dT_dq + G;
}

// Central-difference Jacobian of a vector function of the configuration.
template <typename F>
Eigen::MatrixXd fd_jacobian(F f, const Eigen::VectorXd& x, double eps = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(x.size(), j);
    J.col(j) = (f(x + eps * e) - f(x - eps * e)) / (2.0 * eps);
  }
  return J;
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref) {
  return (got - ref).cwiseAbs().maxCoeff() /
         std::max(1.0, ref.cwiseAbs().maxCoeff());
}

inline Eigen::VectorXd random_vec(int n, double lo, double hi,
                                  std::mt19937& gen) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

}  // namespace oracle
