#include "tadv/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "tadv/errors.hpp"

namespace tadv {
namespace {

constexpr int kPlanarLinks = 3;
constexpr int kCartesianDim = 6;

// In-plane basis: link direction at cumulative angle theta and its
// derivative. theta = 0 points along +x, growing theta turns toward +z.
Eigen::Vector3d dir(double th) { return {std::cos(th), 0.0, std::sin(th)}; }
Eigen::Vector3d dir_d(double th) { return {-std::sin(th), 0.0, std::cos(th)}; }

struct PlanarKin {
  Eigen::Vector3d theta;               // cumulative link angles
  Eigen::Vector3d omega;               // cumulative link rates
  Eigen::Matrix<double, 3, 4> joints;  // base and the three link tips
};

PlanarKin planar_kin(const RobotModel& m, const Eigen::VectorXd& q,
                     const Eigen::VectorXd& nu) {
  PlanarKin k;
  k.joints.col(0).setZero();
  double th = 0.0;
  double w = 0.0;
  for (int i = 0; i < kPlanarLinks; ++i) {
    th += q(i);
    w += nu(i);
    k.theta(i) = th;
    k.omega(i) = w;
    k.joints.col(i + 1) = k.joints.col(i) + m.lengths[i] * dir(th);
  }
  return k;
}

// Point rigidly attached to link `last`, written as sum_m a[m] dir(theta_m).
// Carries everything the dynamics needs: position, linear Jacobian and the
// nu_dot = 0 (velocity product) acceleration.
struct PointKin {
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  Eigen::Matrix3d Jv = Eigen::Matrix3d::Zero();
  Eigen::Vector3d acc0 = Eigen::Vector3d::Zero();
};

PointKin chain_point(const PlanarKin& k, const std::array<double, 3>& a, int last) {
  PointKin p;
  for (int m = 0; m <= last; ++m) {
    const Eigen::Vector3d d = dir(k.theta(m));
    const Eigen::Vector3d dd = dir_d(k.theta(m));
    p.pos += a[m] * d;
    p.acc0 -= a[m] * k.omega(m) * k.omega(m) * d;
    for (int j = 0; j <= m; ++j) {
      p.Jv.col(j) += a[m] * dd;
    }
  }
  return p;
}

std::array<double, 3> tip_weights(const RobotModel& m, int link) {
  std::array<double, 3> a = {0.0, 0.0, 0.0};
  for (int i = 0; i <= link; ++i) a[i] = m.lengths[i];
  return a;
}

std::array<double, 3> com_weights(const RobotModel& m, int link) {
  std::array<double, 3> a = {0.0, 0.0, 0.0};
  for (int i = 0; i < link; ++i) a[i] = m.lengths[i];
  a[link] = 0.5 * m.lengths[link];
  return a;
}

// 0-based index of a planar link frame (frames sit at the distal ends).
int planar_link_index(const std::string& link) {
  if (link == "link1") return 0;
  if (link == "link2") return 1;
  if (link == "link3" || link == "ee") return 2;
  throw ContractViolation("unknown planar link id: " + link);
}

// Full 6-row Jacobian of a planar link frame. Joint axes are -y.
Eigen::MatrixXd planar_frame_jacobian(const RobotModel& m, const PlanarKin& k,
                                      int link) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, kPlanarLinks);
  const PointKin tip = chain_point(k, tip_weights(m, link), link);
  J.topRows<3>() = tip.Jv;
  for (int j = 0; j <= link; ++j) J(4, j) = -1.0;
  return J;
}

void check_state(const RobotModel& model, const GeneralizedState& state,
                 const char* where) {
  if (state.q.size() != model.dim() || state.nu.size() != model.dim()) {
    throw ContractViolation(std::string(where) + ": state dimension mismatch");
  }
  if (!state.q.allFinite() || !state.nu.allFinite()) {
    throw ContractViolation(std::string(where) + ": non-finite state");
  }
}

}  // namespace

RobotModel RobotModel::cartesian_mass(double mass, const Eigen::Vector3d& rot_inertia,
                                      double gravity) {
  RobotModel m;
  m.kind = ModelKind::CartesianMass;
  m.masses = {mass};
  m.inertias = {rot_inertia(0), rot_inertia(1), rot_inertia(2)};
  m.gravity = gravity;
  m.task_link = "body";
  m.contact_links = {"body"};
  m.validate();
  return m;
}

RobotModel RobotModel::planar_3link(const std::array<double, 3>& masses,
                                    const std::array<double, 3>& lengths,
                                    const std::array<double, 3>& inertias,
                                    double gravity) {
  RobotModel m;
  m.kind = ModelKind::Planar3Link;
  m.masses.assign(masses.begin(), masses.end());
  m.lengths.assign(lengths.begin(), lengths.end());
  m.inertias.assign(inertias.begin(), inertias.end());
  m.gravity = gravity;
  m.task_link = "ee";
  m.contact_links = {"ee"};
  m.validate();
  return m;
}

RobotModel RobotModel::planar_3link_rods(const std::array<double, 3>& masses,
                                         const std::array<double, 3>& lengths,
                                         double gravity) {
  std::array<double, 3> inertias;
  for (int i = 0; i < kPlanarLinks; ++i) {
    inertias[i] = masses[i] * lengths[i] * lengths[i] / 12.0;
  }
  return planar_3link(masses, lengths, inertias, gravity);
}

int RobotModel::dim() const {
  return kind == ModelKind::CartesianMass ? kCartesianDim : kPlanarLinks;
}

void RobotModel::validate() const {
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x) && x > 0.0; });
  };
  if (!std::isfinite(gravity) || gravity < 0.0) {
    throw ContractViolation("model: gravity must be finite and >= 0");
  }
  if (kind == ModelKind::CartesianMass) {
    if (masses.size() != 1 || !positive(masses)) {
      throw ContractViolation("cartesian-mass: needs one positive mass");
    }
    if (inertias.size() != 3 || !positive(inertias)) {
      throw ContractViolation("cartesian-mass: needs three positive rotational inertias");
    }
    if (task_link != "body") {
      throw ContractViolation("cartesian-mass: unknown task link " + task_link);
    }
    if (contact_links.empty()) {
      throw ContractViolation("model: contact_links must not be empty");
    }
    for (const auto& l : contact_links) {
      if (l != "body") throw ContractViolation("cartesian-mass: unknown contact link " + l);
    }
  } else {
    if (masses.size() != 3 || !positive(masses) || lengths.size() != 3 ||
        !positive(lengths) || inertias.size() != 3 || !positive(inertias)) {
      throw ContractViolation("planar-3link: needs three positive masses, lengths, inertias");
    }
    planar_link_index(task_link);
    if (contact_links.empty()) {
      throw ContractViolation("model: contact_links must not be empty");
    }
    for (const auto& l : contact_links) planar_link_index(l);
  }
}

DynamicsTerms compute_terms(const RobotModel& model, const GeneralizedState& state) {
  model.validate();
  check_state(model, state, "compute_terms");

  const int n = model.dim();
  DynamicsTerms T;
  T.B = Eigen::MatrixXd::Identity(n, n);

  if (model.kind == ModelKind::CartesianMass) {
    const double m = model.masses[0];
    Eigen::VectorXd diag(kCartesianDim);
    diag << m, m, m, model.inertias[0], model.inertias[1], model.inertias[2];
    T.M = diag.asDiagonal();
    T.G = Eigen::VectorXd::Zero(kCartesianDim);
    T.G(2) = m * model.gravity;
    T.h = T.G;
    T.J = Eigen::MatrixXd::Identity(6, 6);
    T.Jdot_nu.setZero();
    T.Jc.resize(6 * static_cast<int>(model.contact_links.size()), 6);
    for (size_t c = 0; c < model.contact_links.size(); ++c) {
      T.Jc.middleRows<6>(6 * static_cast<int>(c)) = Eigen::MatrixXd::Identity(6, 6);
    }
    return T;
  }

  const PlanarKin kin = planar_kin(model, state.q, state.nu);

  Eigen::Matrix3d M3 = Eigen::Matrix3d::Zero();
  Eigen::Vector3d G3 = Eigen::Vector3d::Zero();
  Eigen::Vector3d Cnu3 = Eigen::Vector3d::Zero();
  for (int i = 0; i < kPlanarLinks; ++i) {
    const PointKin com = chain_point(kin, com_weights(model, i), i);
    M3 += model.masses[i] * com.Jv.transpose() * com.Jv;
    // Rotational kinetic term: the link rate is the sum of the first i+1
    // joint rates, so I_i spreads over that leading block.
    for (int a = 0; a <= i; ++a) {
      for (int b = 0; b <= i; ++b) M3(a, b) += model.inertias[i];
    }
    G3 += model.masses[i] * model.gravity * com.Jv.row(2).transpose();
    Cnu3 += model.masses[i] * com.Jv.transpose() * com.acc0;
  }

  T.M = M3;
  T.G = G3;
  T.h = Cnu3 + G3;

  const int task = planar_link_index(model.task_link);
  T.J = planar_frame_jacobian(model, kin, task);
  const PointKin task_tip = chain_point(kin, tip_weights(model, task), task);
  T.Jdot_nu.setZero();
  T.Jdot_nu.head<3>() = task_tip.acc0;

  T.Jc.resize(6 * static_cast<int>(model.contact_links.size()), kPlanarLinks);
  for (size_t c = 0; c < model.contact_links.size(); ++c) {
    T.Jc.middleRows<6>(6 * static_cast<int>(c)) =
        planar_frame_jacobian(model, kin, planar_link_index(model.contact_links[c]));
  }
  return T;
}

std::pair<Eigen::MatrixXd, Vector6d> task_jacobian(const RobotModel& model,
                                                   const GeneralizedState& state) {
  model.validate();
  check_state(model, state, "task_jacobian");
  if (model.kind == ModelKind::CartesianMass) {
    return {Eigen::MatrixXd::Identity(6, 6), Vector6d::Zero()};
  }
  const PlanarKin kin = planar_kin(model, state.q, state.nu);
  const int task = planar_link_index(model.task_link);
  Vector6d jdot_nu = Vector6d::Zero();
  jdot_nu.head<3>() = chain_point(kin, tip_weights(model, task), task).acc0;
  return {planar_frame_jacobian(model, kin, task), jdot_nu};
}

Eigen::MatrixXd link_jacobian(const RobotModel& model, const GeneralizedState& state,
                              const std::string& link) {
  model.validate();
  check_state(model, state, "link_jacobian");
  if (model.kind == ModelKind::CartesianMass) {
    if (link != "body") throw ContractViolation("unknown link id: " + link);
    return Eigen::MatrixXd::Identity(6, 6);
  }
  const PlanarKin kin = planar_kin(model, state.q, state.nu);
  return planar_frame_jacobian(model, kin, planar_link_index(link));
}

Vector6d link_pose(const RobotModel& model, const GeneralizedState& state,
                   const std::string& link) {
  model.validate();
  check_state(model, state, "link_pose");
  if (model.kind == ModelKind::CartesianMass) {
    if (link != "body") throw ContractViolation("unknown link id: " + link);
    return state.q;
  }
  const PlanarKin kin = planar_kin(model, state.q, state.nu);
  const int idx = planar_link_index(link);
  Vector6d pose = Vector6d::Zero();
  pose.head<3>() = kin.joints.col(idx + 1);
  // Fixed-axis rotation vector about the -y joint axis.
  pose(4) = -kin.theta(idx);
  return pose;
}

Vector6d task_pose(const RobotModel& model, const GeneralizedState& state) {
  return link_pose(model, state, model.task_link);
}

Eigen::VectorXd forward_dynamics(const RobotModel& model, const GeneralizedState& state,
                                 const Eigen::VectorXd& tau,
                                 const std::vector<std::pair<std::string, Wrench>>& fext) {
  model.validate();
  check_state(model, state, "forward_dynamics");
  if (tau.size() != model.dim()) {
    throw ContractViolation("forward_dynamics: tau dimension mismatch");
  }
  if (!tau.allFinite()) {
    throw ContractViolation("forward_dynamics: non-finite tau");
  }

  const DynamicsTerms T = compute_terms(model, state);
  Eigen::VectorXd rhs = T.B * tau - T.h;
  for (const auto& [link, w] : fext) {
    if (std::find(model.contact_links.begin(), model.contact_links.end(), link) ==
        model.contact_links.end()) {
      throw ContractViolation("forward_dynamics: wrench on non-contact link " + link);
    }
    if (!w.allFinite()) {
      throw ContractViolation("forward_dynamics: non-finite wrench");
    }
    rhs += link_jacobian(model, state, link).transpose() * w;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(T.M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("forward_dynamics: mass matrix not positive definite");
  }
  return llt.solve(rhs);
}

GeneralizedState step(const GeneralizedState& state, const Eigen::VectorXd& nu_dot,
                      double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ContractViolation("step: dt must be positive");
  }
  if (state.q.size() != state.nu.size() || nu_dot.size() != state.nu.size()) {
    throw ContractViolation("step: dimension mismatch");
  }
  if (!state.q.allFinite() || !state.nu.allFinite() || !nu_dot.allFinite()) {
    throw ContractViolation("step: non-finite input");
  }
  GeneralizedState next;
  next.nu = state.nu + nu_dot * dt;
  next.q = state.q + next.nu * dt;
  return next;
}

double kinetic_energy(const RobotModel& model, const GeneralizedState& state) {
  const DynamicsTerms T = compute_terms(model, state);
  return 0.5 * state.nu.dot(T.M * state.nu);
}

double potential_energy(const RobotModel& model, const GeneralizedState& state) {
  model.validate();
  check_state(model, state, "potential_energy");
  if (model.kind == ModelKind::CartesianMass) {
    return model.masses[0] * model.gravity * state.q(2);
  }
  const PlanarKin kin = planar_kin(model, state.q, state.nu);
  double v = 0.0;
  for (int i = 0; i < kPlanarLinks; ++i) {
    const Eigen::Vector3d com =
        kin.joints.col(i) + 0.5 * model.lengths[i] * dir(kin.theta(i));
    v += model.masses[i] * model.gravity * com(2);
  }
  return v;
}

}  // namespace tadv
