#include "demobot/align.hpp"

#include <cmath>

namespace demobot {

HandReprojectionProblem::HandReprojectionProblem(const HandModel& model, const Camera& cam,
                                                 const FrameDetections& det,
                                                 bool optimize_beta, double beta_min)
    : model_(model),
      cam_(cam),
      det_(det),
      optimize_beta_(optimize_beta),
      beta_min_(beta_min),
      cam_from_world_(cam.camera_from_world()) {
  if (static_cast<int>(det.size()) != model.keypoint_count())
    throw ContractViolation("detections count " + std::to_string(det.size()) +
                            " != hand keypoint count " +
                            std::to_string(model.keypoint_count()));
}

int HandReprojectionProblem::dim() const {
  return 6 + HandModel::kThetaDim + (optimize_beta_ ? HandModel::kFingers : 0);
}

Eigen::VectorXd HandReprojectionProblem::residual(const HandParams& p) const {
  const int n_kp = model_.keypoint_count();
  const auto pts_world = model_.keypoints_3d(p);
  Eigen::VectorXd r(2 * n_kp);
  for (int k = 0; k < n_kp; ++k) {
    const Eigen::Vector3d p_cam = cam_from_world_.apply(pts_world[k]);
    const Eigen::Vector2d uv = project_point(cam_.K, p_cam, k);
    const double w = std::sqrt(std::max(det_[k].conf, 0.0));
    r.segment<2>(2 * k) = w * (uv - det_[k].uv);
  }
  return r;
}

Eigen::MatrixXd HandReprojectionProblem::jacobian(const HandParams& p) const {
  const int n_kp = model_.keypoint_count();
  const int theta_dim = HandModel::kThetaDim;
  const auto unit_local = model_.keypoints_local_unit(p.theta);
  const Eigen::Matrix3d R_h = p.global.rotation_matrix();
  const Eigen::Matrix3d R_cw = cam_from_world_.rotation_matrix();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n_kp, dim());
  for (int k = 0; k < n_kp; ++k) {
    const int finger = model_.keypoint_finger(k);
    const double beta_f = (finger < 0) ? 1.0 : p.beta[finger];
    const Eigen::Vector3d local = beta_f * unit_local[k];
    const Eigen::Vector3d world = p.global.apply(local);
    const Eigen::Vector3d p_cam = cam_from_world_.apply(world);
    const double w = std::sqrt(std::max(det_[k].conf, 0.0));
    const Eigen::Matrix<double, 2, 3> Jp = w * projection_jacobian(cam_.K, p_cam) * R_cw;
    J.block<2, 3>(2 * k, 0) = Jp;                                // translation
    J.block<2, 3>(2 * k, 3) = Jp * (-skew(R_h * local));         // left rotation increment
    if (finger >= 0) {
      const Eigen::MatrixXd Jtheta = model_.keypoint_theta_jacobian_unit(p.theta, k);
      J.block(2 * k, 6, 2, theta_dim) = Jp * (beta_f * (R_h * Jtheta));
      if (optimize_beta_)
        J.block<2, 1>(2 * k, 6 + theta_dim + finger) = Jp * (R_h * unit_local[k]);
    }
  }
  return J;
}

HandParams HandReprojectionProblem::retract(const HandParams& p,
                                            const Eigen::VectorXd& delta) const {
  HandParams out = p;
  out.global = pose_retract(p.global, delta.segment<3>(0), delta.segment<3>(3));
  out.theta += delta.segment(6, HandModel::kThetaDim);
  model_.clamp_theta(out.theta);
  if (optimize_beta_) {
    out.beta += delta.segment(6 + HandModel::kThetaDim, HandModel::kFingers);
    out.beta = out.beta.cwiseMax(beta_min_);
  }
  return out;
}

AlignResult align_hand_pose(const HandModel& model, const Camera& cam,
                            const FrameDetections& det, const HandParams& init,
                            const AlignOptions& opts) {
  int observed = 0;
  for (const auto& d : det)
    if (d.conf >= opts.conf_threshold) ++observed;
  if (observed < opts.min_keypoints)
    throw InsufficientObservations("only " + std::to_string(observed) +
                                   " confident keypoints, need " +
                                   std::to_string(opts.min_keypoints));

  const HandReprojectionProblem fit(model, cam, det, opts.optimize_beta, opts.beta_min);

  LmProblem<HandParams> problem;
  problem.residual = [&](const HandParams& p) { return fit.residual(p); };
  problem.jacobian = [&](const HandParams& p) { return fit.jacobian(p); };
  problem.retract = [&](const HandParams& p, const Eigen::VectorXd& d) {
    return fit.retract(p, d);
  };

  HandParams start = init;
  model.clamp_theta(start.theta);
  start.beta = start.beta.cwiseMax(opts.beta_min);

  const LmResult<HandParams> lm = levenberg_marquardt(start, problem, opts.lm);

  AlignResult out;
  out.params = lm.state;
  out.final_cost = lm.cost;
  out.iters = lm.iters;
  out.cost_trace = lm.cost_trace;
  return out;
}

}  // namespace demobot
