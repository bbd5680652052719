#pragma once

#include "demobot/chain.hpp"
#include "demobot/levmar.hpp"
#include "demobot/se3.hpp"

namespace demobot {

// hand-model keypoint index -> robot keypoint index (into the robot chain's
// keypoint list); -1 leaves a human keypoint unused.
struct RetargetMap {
  std::vector<int> robot_keypoint;

  int mapped_count() const {
    int n = 0;
    for (int v : robot_keypoint)
      if (v >= 0) ++n;
    return n;
  }
};

// Joint fit of robot hand articulation and 6-DoF floating base to a set of
// target keypoints. Tangent layout: [t(3), r(3), dq(movable joints)].
class RetargetProblem {
 public:
  RetargetProblem(const KinematicChain& robot_hand, const RetargetMap& map,
                  const std::vector<Eigen::Vector3d>& targets);

  struct State {
    JointConfig q;
    Pose base;
  };

  int dim() const { return 6 + static_cast<int>(movable_.size()); }
  Eigen::VectorXd residual(const State& s) const;
  Eigen::MatrixXd jacobian(const State& s) const;
  State retract(const State& s, const Eigen::VectorXd& delta) const;
  double rms(const State& s) const;

 private:
  const KinematicChain& chain_;
  std::vector<int> movable_;
  // (human keypoint, robot chain frame) pairs actually fitted.
  std::vector<std::pair<int, int>> pairs_;
  const std::vector<Eigen::Vector3d>& targets_;
};

struct RetargetOptions {
  LmOptions lm = [] {
    LmOptions o;
    o.max_iters = 120;
    return o;
  }();
};

struct RetargetResult {
  JointConfig q;
  Pose p_base;
  double rms = 0.0;  // meters, over mapped keypoints
  int iters = 0;
  std::vector<double> cost_trace;
};

// Recovers (q_h, p_base) that best mimic the given 3D hand joint locations.
// Warm-start with the previous frame's solution for temporally coherent
// tracks.
RetargetResult retarget_hand(const std::vector<Eigen::Vector3d>& hand_joints_3d,
                             const KinematicChain& robot_hand, const RetargetMap& map,
                             const JointConfig& q_init, const Pose& p_init,
                             const RetargetOptions& opts = {});

}  // namespace demobot
