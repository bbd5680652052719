#pragma once

#include <string>
#include <variant>
#include <vector>

#include "demobot/se3.hpp"

namespace demobot {

struct CylinderShape {
  double radius = 0.02;
  double half_length = 0.12;  // along body z
};

struct BoxShape {
  Eigen::Vector3d half_extents{0.05, 0.05, 0.05};
};

// Rigid task object. Axis-symmetric objects are represented by three
// collinear keypoints on the principal axis; everything else by the eight
// oriented-bounding-box corners.
struct ObjectSpec {
  std::string name;
  std::variant<CylinderShape, BoxShape> shape = CylinderShape{};
  bool axis_symmetric = true;
  bool fixed = false;  // scenery: never moves, never grasped
  Pose init_pose;

  double bounding_radius() const;
};

// Keypoints in the body frame.
std::vector<Eigen::Vector3d> object_keypoints_local(const ObjectSpec& spec);

// Body keypoints transformed by `pose`.
std::vector<Eigen::Vector3d> object_keypoints(const ObjectSpec& spec, const Pose& pose);

// Distance from a world point to the object's surface; 0 inside.
double object_surface_distance(const ObjectSpec& spec, const Pose& pose,
                               const Eigen::Vector3d& point);

}  // namespace demobot
