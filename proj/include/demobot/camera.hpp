#pragma once

#include <Eigen/Dense>
#include <vector>

#include "demobot/errors.hpp"
#include "demobot/se3.hpp"

namespace demobot {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Intrinsics plus world-from-camera extrinsic pose.
struct Camera {
  CameraIntrinsics K;
  Pose pose;  // world_from_camera

  Pose camera_from_world() const { return pose.inverse(); }
};

struct ProjectionError : ContractViolation {
  int point_index;
  ProjectionError(int idx, double z)
      : ContractViolation("point " + std::to_string(idx) + " behind camera (z=" +
                          std::to_string(z) + ")"),
        point_index(idx) {}
};

// Pinhole projection of camera-frame points. Throws ProjectionError naming
// the first point with z <= 0.
std::vector<Eigen::Vector2d> project_points(const CameraIntrinsics& K,
                                            const std::vector<Eigen::Vector3d>& pts);

Eigen::Vector2d project_point(const CameraIntrinsics& K, const Eigen::Vector3d& p, int index = 0);

// d(projection)/d(camera-frame point).
Eigen::Matrix<double, 2, 3> projection_jacobian(const CameraIntrinsics& K,
                                                const Eigen::Vector3d& p);

}  // namespace demobot
