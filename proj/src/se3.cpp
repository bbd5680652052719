#include "demobot/se3.hpp"

#include <cmath>

namespace demobot {

Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // shortest arc
  const Eigen::Vector3d v(q.x(), q.y(), q.z());
  const double vnorm = v.norm();
  if (vnorm < 1e-12) return 2.0 * v;  // small-angle: log(q) ~ 2*vec
  const double angle = 2.0 * std::atan2(vnorm, q.w());
  return (angle / vnorm) * v;
}

double rotation_geodesic(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return rotation_log(a.conjugate() * b).norm();
}

Eigen::Vector3d orientation_error(const Eigen::Quaterniond& target,
                                  const Eigen::Quaterniond& current) {
  return rotation_log(target * current.conjugate());
}

Eigen::Quaterniond quat_exp(const Eigen::Vector3d& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    Eigen::Quaterniond q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    return q.normalized();
  }
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, rotvec / angle));
}

Pose pose_retract(const Pose& p, const Eigen::Vector3d& dt, const Eigen::Vector3d& dr) {
  Pose out;
  out.rotation = (quat_exp(dr) * p.rotation).normalized();
  out.translation = p.translation + dt;
  return out;
}

bool pose_approx_equal(const Pose& a, const Pose& b, double tol_trans, double tol_rot) {
  return (a.translation - b.translation).norm() <= tol_trans &&
         rotation_geodesic(a.rotation, b.rotation) <= tol_rot;
}

}  // namespace demobot
