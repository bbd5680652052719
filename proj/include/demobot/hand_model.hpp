#pragma once

#include <Eigen/Dense>
#include <vector>

#include "demobot/camera.hpp"
#include "demobot/chain.hpp"
#include "demobot/se3.hpp"

namespace demobot {

// Pose/shape parameters of the parametric hand: local joint angles theta
// (3 per finger, finger-major order), per-finger scale beta, and the global
// wrist pose.
struct HandParams {
  Eigen::VectorXd theta;  // 15, radians
  Eigen::VectorXd beta;   // 5, dimensionless, > 0
  Pose global;            // world_from_hand (R^h, t^h)

  static HandParams neutral();
};

// Kinematic 5-finger hand: a wrist root plus 3 flexion joints per finger,
// 21 keypoints (wrist + MCP/PIP/DIP/TIP per finger). Evaluating the model
// yields 3D keypoints; with a camera, 2D keypoints. beta scales each
// finger's whole offset path about the wrist, so keypoints are linear in it.
class HandModel {
 public:
  static constexpr int kFingers = 5;
  static constexpr int kThetaDim = 15;
  static constexpr int kKeypoints = 21;

  // `scale` grows the whole layout; the robot hand uses a separate chain
  // file, this model only stands in for the human hand.
  static HandModel make_default(double scale = 1.0);

  const KinematicChain& chain() const { return chain_; }
  int keypoint_count() const { return kKeypoints; }

  // Finger owning keypoint k (-1 for the wrist).
  int keypoint_finger(int k) const { return k == 0 ? -1 : (k - 1) / 4; }

  JointConfig config_from_theta(const Eigen::VectorXd& theta) const;

  // Keypoints in the hand-local frame (wrist at origin), beta applied.
  std::vector<Eigen::Vector3d> keypoints_local(const HandParams& p) const;
  // World-frame keypoints.
  std::vector<Eigen::Vector3d> keypoints_3d(const HandParams& p) const;
  // Pixel keypoints through `cam`. Throws ProjectionError if behind camera.
  std::vector<Eigen::Vector2d> keypoints_2d(const HandParams& p, const Camera& cam) const;

  // d(local keypoint k)/d(theta) as a 3 x 15 block, at unit beta. The
  // caller applies the beta_f scaling (keypoints are beta_f * unit path).
  Eigen::MatrixXd keypoint_theta_jacobian_unit(const Eigen::VectorXd& theta, int k) const;

  // Unit-beta local keypoints (used for the beta derivative, which is the
  // unit-beta position itself).
  std::vector<Eigen::Vector3d> keypoints_local_unit(const Eigen::VectorXd& theta) const;

  void clamp_theta(Eigen::VectorXd& theta) const;
  double theta_lo(int i) const;
  double theta_hi(int i) const;

  // Curl profile: theta for a normalized aperture in [0 open, 1 closed].
  Eigen::VectorXd theta_from_aperture(double aperture) const;

 private:
  KinematicChain chain_;
  std::vector<int> movable_;             // chain joint index per theta entry
  std::vector<int> keypoint_chain_idx_;  // chain frame per keypoint
  Eigen::VectorXd closed_profile_;       // theta at aperture 1
};

}  // namespace demobot
