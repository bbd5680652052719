#include "demobot/hand_model.hpp"

#include <cmath>

#include "demobot/errors.hpp"

namespace demobot {

namespace {

constexpr const char* kFingerNames[HandModel::kFingers] = {"thumb", "index", "middle", "ring",
                                                           "pinky"};

struct FingerLayout {
  Eigen::Vector3d root;      // wrist -> MCP offset
  Eigen::Quaterniond pre;    // root pre-rotation
  double links[3];           // MCP->PIP, PIP->DIP, DIP->TIP
};

// Fingers extend +y, palm normal -z, thumb on the -x side (right hand).
// Flexion axis is local -x so positive angles curl toward the palm.
std::vector<FingerLayout> default_layout(double s) {
  const Eigen::Quaterniond thumb_pre =
      Eigen::Quaterniond(Eigen::AngleAxisd(-0.9, Eigen::Vector3d::UnitZ())) *
      Eigen::Quaterniond(Eigen::AngleAxisd(-0.5, Eigen::Vector3d::UnitY()));
  return {
      {{-0.025 * s, 0.020 * s, 0.0}, thumb_pre, {0.045 * s, 0.035 * s, 0.028 * s}},
      {{-0.022 * s, 0.085 * s, 0.0}, Eigen::Quaterniond::Identity(),
       {0.042 * s, 0.026 * s, 0.022 * s}},
      {{0.000 * s, 0.090 * s, 0.0}, Eigen::Quaterniond::Identity(),
       {0.046 * s, 0.029 * s, 0.023 * s}},
      {{0.022 * s, 0.085 * s, 0.0}, Eigen::Quaterniond::Identity(),
       {0.042 * s, 0.027 * s, 0.022 * s}},
      {{0.043 * s, 0.075 * s, 0.0}, Eigen::Quaterniond::Identity(),
       {0.033 * s, 0.021 * s, 0.019 * s}},
  };
}

constexpr double kThetaLo = -0.35;
constexpr double kThetaHi = 2.1;

}  // namespace

HandParams HandParams::neutral() {
  HandParams p;
  p.theta = Eigen::VectorXd::Zero(HandModel::kThetaDim);
  p.beta = Eigen::VectorXd::Ones(HandModel::kFingers);
  return p;
}

HandModel HandModel::make_default(double scale) {
  HandModel m;
  m.chain_ = KinematicChain("hand_model");
  m.chain_.add_joint("wrist", "", Eigen::Vector3d::UnitZ(), Pose(), 0.0, 0.0);
  m.keypoint_chain_idx_.push_back(0);

  const Eigen::Vector3d flex_axis(-1.0, 0.0, 0.0);
  const auto layout = default_layout(scale);
  std::vector<std::string> keypoint_names = {"wrist"};
  for (int f = 0; f < kFingers; ++f) {
    const std::string fn = kFingerNames[f];
    const FingerLayout& lay = layout[f];
    m.movable_.push_back(m.chain_.add_joint(fn + "_mcp", "wrist", flex_axis,
                                            Pose(lay.pre, lay.root), kThetaLo, kThetaHi));
    m.movable_.push_back(m.chain_.add_joint(
        fn + "_pip", fn + "_mcp", flex_axis,
        Pose::from_translation({0.0, lay.links[0], 0.0}), kThetaLo, kThetaHi));
    m.movable_.push_back(m.chain_.add_joint(
        fn + "_dip", fn + "_pip", flex_axis,
        Pose::from_translation({0.0, lay.links[1], 0.0}), kThetaLo, kThetaHi));
    m.chain_.add_joint(fn + "_tip", fn + "_dip", flex_axis,
                       Pose::from_translation({0.0, lay.links[2], 0.0}), 0.0, 0.0);
    for (const char* part : {"_mcp", "_pip", "_dip", "_tip"})
      keypoint_names.push_back(fn + part);
  }
  m.chain_.set_keypoint_frames(keypoint_names);
  m.keypoint_chain_idx_.clear();
  for (const auto& n : keypoint_names) m.keypoint_chain_idx_.push_back(m.chain_.frame_index(n));

  m.closed_profile_ = Eigen::VectorXd::Zero(kThetaDim);
  for (int f = 0; f < kFingers; ++f) {
    const bool thumb = (f == 0);
    m.closed_profile_[3 * f + 0] = thumb ? 0.85 : 1.15;
    m.closed_profile_[3 * f + 1] = thumb ? 0.70 : 1.20;
    m.closed_profile_[3 * f + 2] = thumb ? 0.45 : 0.75;
  }
  return m;
}

JointConfig HandModel::config_from_theta(const Eigen::VectorXd& theta) const {
  if (theta.size() != kThetaDim)
    throw ContractViolation("hand theta must have 15 entries, got " +
                            std::to_string(theta.size()));
  JointConfig q = JointConfig::zeros(chain_.joint_count(), chain_.name());
  for (int i = 0; i < kThetaDim; ++i) q.values[movable_[i]] = theta[i];
  return q;
}

std::vector<Eigen::Vector3d> HandModel::keypoints_local_unit(const Eigen::VectorXd& theta) const {
  return chain_.joint_positions_3d(config_from_theta(theta));
}

std::vector<Eigen::Vector3d> HandModel::keypoints_local(const HandParams& p) const {
  if (p.beta.size() != kFingers) throw ContractViolation("hand beta must have 5 entries");
  if ((p.beta.array() <= 0.0).any()) throw ContractViolation("hand beta must be positive");
  std::vector<Eigen::Vector3d> pts = keypoints_local_unit(p.theta);
  for (int k = 1; k < kKeypoints; ++k) pts[k] *= p.beta[keypoint_finger(k)];
  return pts;
}

std::vector<Eigen::Vector3d> HandModel::keypoints_3d(const HandParams& p) const {
  std::vector<Eigen::Vector3d> pts = keypoints_local(p);
  for (auto& x : pts) x = p.global.apply(x);
  return pts;
}

std::vector<Eigen::Vector2d> HandModel::keypoints_2d(const HandParams& p,
                                                     const Camera& cam) const {
  std::vector<Eigen::Vector3d> pts = keypoints_3d(p);
  const Pose cam_from_world = cam.camera_from_world();
  for (auto& x : pts) x = cam_from_world.apply(x);
  return project_points(cam.K, pts);
}

Eigen::MatrixXd HandModel::keypoint_theta_jacobian_unit(const Eigen::VectorXd& theta,
                                                        int k) const {
  const JointConfig q = config_from_theta(theta);
  const FkResult fk = chain_.forward_kinematics(q);
  const int frame = keypoint_chain_idx_[k];
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, kThetaDim);
  const Eigen::Vector3d p_frame = fk.frames[frame].translation;
  for (int j = frame; j >= 0; j = chain_.joint(j).parent) {
    if (chain_.joint(j).fixed()) continue;
    // Which theta entry drives chain joint j.
    int theta_idx = -1;
    for (int i = 0; i < kThetaDim; ++i)
      if (movable_[i] == j) {
        theta_idx = i;
        break;
      }
    if (theta_idx < 0) continue;
    const Eigen::Vector3d axis_world = fk.frames[j].rotation * chain_.joint(j).axis;
    J.col(theta_idx) = axis_world.cross(p_frame - fk.frames[j].translation);
  }
  return J;
}

void HandModel::clamp_theta(Eigen::VectorXd& theta) const {
  for (int i = 0; i < theta.size(); ++i) theta[i] = std::clamp(theta[i], kThetaLo, kThetaHi);
}

double HandModel::theta_lo(int) const { return kThetaLo; }
double HandModel::theta_hi(int) const { return kThetaHi; }

Eigen::VectorXd HandModel::theta_from_aperture(double aperture) const {
  return std::clamp(aperture, 0.0, 1.3) * closed_profile_;
}

}  // namespace demobot
