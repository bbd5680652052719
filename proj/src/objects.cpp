#include "demobot/objects.hpp"

#include <cmath>

#include "demobot/errors.hpp"

namespace demobot {

double ObjectSpec::bounding_radius() const {
  if (std::holds_alternative<CylinderShape>(shape)) {
    const auto& c = std::get<CylinderShape>(shape);
    return std::sqrt(c.radius * c.radius + c.half_length * c.half_length);
  }
  return std::get<BoxShape>(shape).half_extents.norm();
}

std::vector<Eigen::Vector3d> object_keypoints_local(const ObjectSpec& spec) {
  if (spec.axis_symmetric) {
    double half = 0.0;
    if (std::holds_alternative<CylinderShape>(spec.shape))
      half = std::get<CylinderShape>(spec.shape).half_length;
    else
      half = std::get<BoxShape>(spec.shape).half_extents.z();
    if (half <= 0.0) throw ConfigError("object '" + spec.name + "': degenerate principal axis");
    return {{0, 0, -half}, {0, 0, 0}, {0, 0, half}};
  }
  if (!std::holds_alternative<BoxShape>(spec.shape))
    throw ConfigError("object '" + spec.name + "': non-symmetric objects need a box shape");
  const Eigen::Vector3d h = std::get<BoxShape>(spec.shape).half_extents;
  std::vector<Eigen::Vector3d> corners;
  corners.reserve(8);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) corners.emplace_back(sx * h.x(), sy * h.y(), sz * h.z());
  return corners;
}

std::vector<Eigen::Vector3d> object_keypoints(const ObjectSpec& spec, const Pose& pose) {
  std::vector<Eigen::Vector3d> pts = object_keypoints_local(spec);
  for (auto& p : pts) p = pose.apply(p);
  return pts;
}

double object_surface_distance(const ObjectSpec& spec, const Pose& pose,
                               const Eigen::Vector3d& point) {
  const Eigen::Vector3d p = pose.inverse().apply(point);
  if (std::holds_alternative<CylinderShape>(spec.shape)) {
    const auto& c = std::get<CylinderShape>(spec.shape);
    const double radial = std::hypot(p.x(), p.y()) - c.radius;
    const double axial = std::abs(p.z()) - c.half_length;
    if (radial <= 0.0 && axial <= 0.0) return 0.0;
    return std::hypot(std::max(radial, 0.0), std::max(axial, 0.0));
  }
  const Eigen::Vector3d h = std::get<BoxShape>(spec.shape).half_extents;
  const Eigen::Vector3d d = p.cwiseAbs() - h;
  if ((d.array() <= 0.0).all()) return 0.0;
  return d.cwiseMax(0.0).norm();
}

}  // namespace demobot
