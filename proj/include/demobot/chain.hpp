#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "demobot/se3.hpp"

namespace demobot {

// Joint vector bound to a named chain. `chain_id` may be empty when the
// binding is obvious from context; non-empty ids are checked against the
// chain they are used with.
struct JointConfig {
  Eigen::VectorXd values;
  std::string chain_id;

  JointConfig() = default;
  explicit JointConfig(Eigen::VectorXd v, std::string id = {})
      : values(std::move(v)), chain_id(std::move(id)) {}

  static JointConfig zeros(int n, std::string id = {}) {
    return JointConfig(Eigen::VectorXd::Zero(n), std::move(id));
  }

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[i]; }
  double& operator[](int i) { return values[i]; }
};

// One revolute joint / frame of the tree. A joint with lo == hi is a fixed
// frame (its angle is pinned); that is how end-effector and fingertip frames
// are expressed.
struct Joint {
  std::string name;
  int parent = -1;  // -1: child of the chain root
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Pose offset;  // parent frame -> joint frame at q = 0 (applied before the rotation)
  double lo = 0.0;
  double hi = 0.0;

  bool fixed() const { return lo == hi; }
};

struct FkResult {
  std::vector<Pose> frames;     // one per joint, root-to-leaf composed
  bool clamped = false;         // any q outside limits (clamped before use)
  std::vector<int> clamped_joints;
};

struct IkParams {
  double damping = 1e-2;  // DLS lambda
  int max_iters = 100;
  double tol_pos = 1e-5;  // m
  double tol_rot = 1e-4;  // rad
  // Extra deterministically-jittered attempts when the first one fails to
  // converge (near-singular or limit-locked seeds). 0 disables.
  int restarts = 2;
};

struct IkResult {
  JointConfig q;
  double pos_error = 0.0;  // m
  double rot_error = 0.0;  // rad
  bool converged = false;
  int iters = 0;
  std::vector<double> error_trace;  // combined error norm per accepted iterate
};

// Serial/tree kinematic chain of revolute joints. Joints are stored in
// topological order (parent index < joint index). All queries are const and
// the type is freely shareable across threads.
class KinematicChain {
 public:
  KinematicChain() = default;
  explicit KinematicChain(std::string name) : name_(std::move(name)) {}

  // Returns the index of the new joint. Parent is named; "" means root.
  int add_joint(const std::string& name, const std::string& parent,
                const Eigen::Vector3d& axis, const Pose& offset, double lo, double hi);

  void set_keypoint_frames(const std::vector<std::string>& names);
  void set_end_effector(const std::string& name);

  const std::string& name() const { return name_; }
  int joint_count() const { return static_cast<int>(joints_.size()); }
  const Joint& joint(int i) const { return joints_[i]; }
  const std::vector<Joint>& joints() const { return joints_; }

  int frame_index(const std::string& name) const;  // -1 if unknown
  int end_effector_index() const { return ee_index_; }
  const std::string& end_effector() const { return ee_name_; }
  const std::vector<std::string>& keypoint_frames() const { return keypoint_names_; }
  const std::vector<int>& keypoint_indices() const { return keypoint_indices_; }

  // Indices of joints with lo < hi, in joint order.
  std::vector<int> movable_joints() const;
  int movable_count() const;

  JointConfig clamp(const JointConfig& q) const;
  bool within_limits(const JointConfig& q, double tol = 0.0) const;

  FkResult forward_kinematics(const JointConfig& q) const;

  // Translations of the keypoint frames, in keypoint-list order.
  std::vector<Eigen::Vector3d> joint_positions_3d(const JointConfig& q) const;

  // Geometric Jacobian of `frame`, 6 x joint_count, rows [linear; angular].
  Eigen::MatrixXd jacobian(const JointConfig& q, const std::string& frame) const;
  Eigen::MatrixXd jacobian(const JointConfig& q, int frame_index) const;

  // Damped-least-squares IK to a full 6-DoF target at the end-effector
  // (or at `frame` when given). Iterates are clamped to joint limits; steps
  // that would increase the error norm are backtracked, so the reported
  // error trace is non-increasing.
  IkResult solve_ik(const Pose& target, const JointConfig& q_init,
                    const IkParams& params = {}, int frame = -1) const;

  // Appends `child` under frame `at` of this chain, prefixing joint names
  // with `prefix`. Keypoints/end-effector of the combined chain are not set.
  KinematicChain attached(const KinematicChain& child, const std::string& at,
                          const std::string& prefix) const;

  // Sum of offset translation norms along the root->frame path (reach bound).
  double path_length(int frame) const;

  void check_config(const JointConfig& q) const;

 private:
  IkResult solve_ik_attempt(const Pose& target, const JointConfig& q_start,
                            const IkParams& params, int frame) const;

  std::string name_;
  std::vector<Joint> joints_;
  std::vector<std::string> keypoint_names_;
  std::vector<int> keypoint_indices_;
  std::string ee_name_;
  int ee_index_ = -1;
};

}  // namespace demobot
