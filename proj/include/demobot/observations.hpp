#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "demobot/errors.hpp"
#include "demobot/se3.hpp"

namespace demobot {

struct Keypoint2D {
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();  // pixels
  double conf = 1.0;                             // [0, 1]
};

using FrameDetections = std::vector<Keypoint2D>;

// Per-frame 2D keypoint detections for one hand.
struct Detections2D {
  std::vector<FrameDetections> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

// Per-frame 6-DoF track of one object. Timestamps strictly increasing.
struct ObjectTrack {
  std::string object_id;
  std::vector<double> stamps;
  std::vector<Pose> poses;

  int frame_count() const { return static_cast<int>(poses.size()); }

  void validate() const {
    if (stamps.size() != poses.size())
      throw ContractViolation("object track: stamps/poses length mismatch");
    for (size_t i = 1; i < stamps.size(); ++i)
      if (!(stamps[i] > stamps[i - 1]))
        throw ContractViolation("object track: timestamps must be strictly increasing");
  }
};

}  // namespace demobot
