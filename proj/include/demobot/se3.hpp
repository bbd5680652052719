#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace demobot {

// Rigid transform as unit quaternion + translation. Quaternions are kept
// normalized; compose() renormalizes to bound drift over long products.
struct Pose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Quaterniond& q, const Eigen::Vector3d& t)
      : rotation(q.normalized()), translation(t) {}

  static Pose identity() { return Pose(); }

  static Pose from_axis_angle(const Eigen::Vector3d& axis, double angle,
                              const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
    return Pose(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())), t);
  }

  static Pose from_translation(const Eigen::Vector3d& t) {
    return Pose(Eigen::Quaterniond::Identity(), t);
  }

  Pose compose(const Pose& other) const {
    Pose out;
    out.rotation = (rotation * other.rotation).normalized();
    out.translation = translation + rotation * other.translation;
    return out;
  }

  Pose operator*(const Pose& other) const { return compose(other); }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return apply(p); }

  Eigen::Matrix3d rotation_matrix() const { return rotation.toRotationMatrix(); }
};

// Rotation-vector (axis * angle) of q, in (-pi, pi].
Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q);

// Geodesic angle between two rotations, in [0, pi].
double rotation_geodesic(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

// Rotation vector that takes `current` onto `target` (world-frame/left error):
// exp(e) * current = target.
Eigen::Vector3d orientation_error(const Eigen::Quaterniond& target,
                                  const Eigen::Quaterniond& current);

Eigen::Quaterniond quat_exp(const Eigen::Vector3d& rotvec);

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

// Left-perturbed pose: (exp(dr), dt) applied on top of p in the world frame.
Pose pose_retract(const Pose& p, const Eigen::Vector3d& dt, const Eigen::Vector3d& dr);

bool pose_approx_equal(const Pose& a, const Pose& b, double tol_trans, double tol_rot);

}  // namespace demobot
