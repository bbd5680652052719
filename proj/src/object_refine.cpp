#include "demobot/object_refine.hpp"

#include <cmath>

#include "demobot/errors.hpp"

namespace demobot {

void PegHoleObjective::validate() const {
  if ((peg_axis[0] - peg_axis[1]).norm() < 1e-9)
    throw ConfigError("peg axis endpoints coincide");
  if ((hole_axis[0] - hole_axis[1]).norm() < 1e-9)
    throw ConfigError("hole axis endpoints coincide");
  if (w_axis < 0.0 || w_endpoint < 0.0) throw ConfigError("peg-hole weights must be >= 0");
  if (w_axis == 0.0 && w_endpoint == 0.0)
    throw ConfigError("peg-hole weights must not both be zero");
}

double peg_hole_cost(const Pose& obj_pose, const PegHoleObjective& objective,
                     const Pose& base_pose) {
  const Eigen::Vector3d tip = obj_pose.apply(objective.peg_axis[0]);
  const Eigen::Vector3d tail = obj_pose.apply(objective.peg_axis[1]);
  const Eigen::Vector3d entry = base_pose.apply(objective.hole_axis[0]);
  const Eigen::Vector3d bottom = base_pose.apply(objective.hole_axis[1]);
  const Eigen::Vector3d u_peg = (tail - tip).normalized();
  const Eigen::Vector3d u_hole = (bottom - entry).normalized();
  return objective.w_axis * (1.0 - std::abs(u_peg.dot(u_hole))) +
         objective.w_endpoint * (tip - entry).squaredNorm();
}

PegHoleProblem::PegHoleProblem(const PegHoleObjective& objective, const Pose& base_pose,
                               const Pose& track_pose, double trust_trans, double trust_rot)
    : objective_(objective),
      base_pose_(base_pose),
      track_pose_(track_pose),
      trust_trans_(trust_trans),
      trust_rot_(trust_rot) {
  objective_.validate();
  hole_entry_world_ = base_pose.apply(objective.hole_axis[0]);
  hole_dir_world_ =
      (base_pose.apply(objective.hole_axis[1]) - hole_entry_world_).normalized();
}

Eigen::VectorXd PegHoleProblem::residual(const Pose& obj_pose) const {
  const Eigen::Vector3d tip = obj_pose.apply(objective_.peg_axis[0]);
  const Eigen::Vector3d d = obj_pose.rotation * (objective_.peg_axis[1] - objective_.peg_axis[0]);
  const Eigen::Vector3d u_peg = d.normalized();
  Eigen::VectorXd r(6);
  r.head<3>() = std::sqrt(objective_.w_axis) * u_peg.cross(hole_dir_world_);
  r.tail<3>() = std::sqrt(objective_.w_endpoint) * (tip - hole_entry_world_);
  return r;
}

Eigen::MatrixXd PegHoleProblem::jacobian(const Pose& obj_pose) const {
  const Eigen::Matrix3d R = obj_pose.rotation_matrix();
  const Eigen::Vector3d tip_body = R * objective_.peg_axis[0];
  const Eigen::Vector3d d = R * (objective_.peg_axis[1] - objective_.peg_axis[0]);
  const double dn = d.norm();
  const Eigen::Vector3d u = d / dn;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, 6);
  // r_axis = s * (u x h): du/ddr = ((I - uu^T)/|d|) * (-[d]x); d(u x h)/du = -[h]x.
  const Eigen::Matrix3d du_ddr = ((Eigen::Matrix3d::Identity() - u * u.transpose()) / dn) *
                                 (-skew(d));
  J.block<3, 3>(0, 3) = std::sqrt(objective_.w_axis) * (-skew(hole_dir_world_)) * du_ddr;
  // r_tip = s * (R p0 + t - entry): d/dt = I, d/ddr = -[R p0]x.
  J.block<3, 3>(3, 0) = std::sqrt(objective_.w_endpoint) * Eigen::Matrix3d::Identity();
  J.block<3, 3>(3, 3) = std::sqrt(objective_.w_endpoint) * (-skew(tip_body));
  return J;
}

Pose PegHoleProblem::retract(const Pose& obj_pose, const Eigen::VectorXd& delta) const {
  Pose out = pose_retract(obj_pose, delta.head<3>(), delta.tail<3>());
  // Project back into the trust region around the tracked pose.
  Eigen::Vector3d dev = out.translation - track_pose_.translation;
  if (dev.norm() > trust_trans_)
    out.translation = track_pose_.translation + dev * (trust_trans_ / dev.norm());
  const Eigen::Vector3d rdev = rotation_log(out.rotation * track_pose_.rotation.conjugate());
  if (rdev.norm() > trust_rot_)
    out.rotation = (quat_exp(rdev * (trust_rot_ / rdev.norm())) * track_pose_.rotation)
                       .normalized();
  return out;
}

bool PegHoleProblem::at_trust_boundary(const Pose& obj_pose) const {
  const double tdev = (obj_pose.translation - track_pose_.translation).norm();
  const double rdev =
      rotation_log(obj_pose.rotation * track_pose_.rotation.conjugate()).norm();
  return tdev >= trust_trans_ - 1e-9 || rdev >= trust_rot_ - 1e-9;
}

RefineResult refine_object_pose(const Pose& track_pose, const PegHoleObjective& objective,
                                const Pose& base_pose, const RefineOptions& opts) {
  const PegHoleProblem fit(objective, base_pose, track_pose, opts.trust_trans, opts.trust_rot);

  LmProblem<Pose> problem;
  problem.residual = [&](const Pose& p) { return fit.residual(p); };
  problem.jacobian = [&](const Pose& p) { return fit.jacobian(p); };
  problem.retract = [&](const Pose& p, const Eigen::VectorXd& d) { return fit.retract(p, d); };
  // Acceptance is judged on the exact task cost, not the surrogate residual.
  problem.cost = [&](const Pose& p) { return peg_hole_cost(p, objective, base_pose); };

  const LmResult<Pose> lm = levenberg_marquardt(track_pose, problem, opts.lm);

  RefineResult out;
  out.pose = lm.state;
  out.cost_before = peg_hole_cost(track_pose, objective, base_pose);
  out.cost_after = lm.cost;
  out.trust_clamped = fit.at_trust_boundary(lm.state);
  out.iters = lm.iters;
  out.cost_trace = lm.cost_trace;
  return out;
}

}  // namespace demobot
