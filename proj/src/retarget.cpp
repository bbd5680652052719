#include "demobot/retarget.hpp"

#include <cmath>

#include "demobot/errors.hpp"

namespace demobot {

RetargetProblem::RetargetProblem(const KinematicChain& robot_hand, const RetargetMap& map,
                                 const std::vector<Eigen::Vector3d>& targets)
    : chain_(robot_hand), movable_(robot_hand.movable_joints()), targets_(targets) {
  if (map.robot_keypoint.empty())
    throw ConfigError("retarget: keypoint correspondence map not configured");
  if (map.robot_keypoint.size() != targets.size())
    throw ConfigError("retarget: correspondence map size " +
                      std::to_string(map.robot_keypoint.size()) +
                      " != keypoint count " + std::to_string(targets.size()));
  const auto& kp_idx = robot_hand.keypoint_indices();
  for (int k = 0; k < static_cast<int>(map.robot_keypoint.size()); ++k) {
    const int rk = map.robot_keypoint[k];
    if (rk < 0) continue;
    if (rk >= static_cast<int>(kp_idx.size()))
      throw ConfigError("retarget: robot keypoint index out of range");
    pairs_.emplace_back(k, kp_idx[rk]);
  }
  if (pairs_.empty()) throw ConfigError("retarget: correspondence map maps no keypoints");
}

Eigen::VectorXd RetargetProblem::residual(const State& s) const {
  const FkResult fk = chain_.forward_kinematics(s.q);
  Eigen::VectorXd r(3 * pairs_.size());
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto [human_k, frame] = pairs_[i];
    r.segment<3>(3 * i) = s.base.apply(fk.frames[frame].translation) - targets_[human_k];
  }
  return r;
}

Eigen::MatrixXd RetargetProblem::jacobian(const State& s) const {
  const FkResult fk = chain_.forward_kinematics(s.q);
  const Eigen::Matrix3d R_b = s.base.rotation_matrix();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * pairs_.size(), dim());
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const int frame = pairs_[i].second;
    const Eigen::Vector3d local = fk.frames[frame].translation;
    J.block<3, 3>(3 * i, 0) = Eigen::Matrix3d::Identity();
    J.block<3, 3>(3 * i, 3) = -skew(R_b * local);
    // Articulation: world linear velocity of the keypoint from each movable
    // ancestor joint, rotated into the base frame.
    for (int j = frame; j >= 0; j = chain_.joint(j).parent) {
      if (chain_.joint(j).fixed()) continue;
      int col = -1;
      for (size_t m = 0; m < movable_.size(); ++m)
        if (movable_[m] == j) {
          col = static_cast<int>(m);
          break;
        }
      if (col < 0) continue;
      const Eigen::Vector3d axis_world = fk.frames[j].rotation * chain_.joint(j).axis;
      J.block<3, 1>(3 * i, 6 + col) =
          R_b * axis_world.cross(local - fk.frames[j].translation);
    }
  }
  return J;
}

RetargetProblem::State RetargetProblem::retract(const State& s,
                                                const Eigen::VectorXd& delta) const {
  State out = s;
  out.base = pose_retract(s.base, delta.head<3>(), delta.segment<3>(3));
  for (size_t m = 0; m < movable_.size(); ++m) out.q.values[movable_[m]] += delta[6 + m];
  out.q = chain_.clamp(out.q);
  return out;
}

double RetargetProblem::rms(const State& s) const {
  const Eigen::VectorXd r = residual(s);
  return std::sqrt(r.squaredNorm() / static_cast<double>(pairs_.size()));
}

RetargetResult retarget_hand(const std::vector<Eigen::Vector3d>& hand_joints_3d,
                             const KinematicChain& robot_hand, const RetargetMap& map,
                             const JointConfig& q_init, const Pose& p_init,
                             const RetargetOptions& opts) {
  robot_hand.check_config(q_init);
  const RetargetProblem fit(robot_hand, map, hand_joints_3d);

  LmProblem<RetargetProblem::State> problem;
  problem.residual = [&](const RetargetProblem::State& s) { return fit.residual(s); };
  problem.jacobian = [&](const RetargetProblem::State& s) { return fit.jacobian(s); };
  problem.retract = [&](const RetargetProblem::State& s, const Eigen::VectorXd& d) {
    return fit.retract(s, d);
  };

  RetargetProblem::State start{robot_hand.clamp(q_init), p_init};
  const auto lm = levenberg_marquardt(start, problem, opts.lm);

  RetargetResult out;
  out.q = lm.state.q;
  out.p_base = lm.state.base;
  out.rms = fit.rms(lm.state);
  out.iters = lm.iters;
  out.cost_trace = lm.cost_trace;
  return out;
}

}  // namespace demobot
