#include "demobot/camera.hpp"

namespace demobot {

Eigen::Vector2d project_point(const CameraIntrinsics& K, const Eigen::Vector3d& p, int index) {
  if (!(p.z() > 0.0)) throw ProjectionError(index, p.z());
  return {K.fx * p.x() / p.z() + K.cx, K.fy * p.y() / p.z() + K.cy};
}

std::vector<Eigen::Vector2d> project_points(const CameraIntrinsics& K,
                                            const std::vector<Eigen::Vector3d>& pts) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(pts.size());
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    out.push_back(project_point(K, pts[i], i));
  return out;
}

Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraIntrinsics& K,
                                                const Eigen::Vector3d& p) {
  const double iz = 1.0 / p.z();
  Eigen::Matrix<double, 2, 3> J;
  J << K.fx * iz, 0.0, -K.fx * p.x() * iz * iz, 0.0, K.fy * iz, -K.fy * p.y() * iz * iz;
  return J;
}

}  // namespace demobot
