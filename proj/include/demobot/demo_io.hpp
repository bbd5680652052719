#pragma once

#include <string>
#include <vector>

#include "demobot/observations.hpp"
#include "demobot/se3.hpp"

namespace demobot {

// keyframe_flag encoding: 0 = not a keyframe; otherwise phase = flag % 10
// (1 reach, 2 grasp-and-lift, 3 goal) and flag / 10 == 1 marks the switch
// stage.
inline constexpr int kDemoFileVersion = 1;

struct DemoFrame {
  double t = 0.0;
  FrameDetections left;
  FrameDetections right;
  Pose obj;
  int keyframe_flag = 0;
  bool contact = false;
};

struct DemoFile {
  int keypoint_count = 21;
  double fps = 30.0;
  std::vector<DemoFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  std::vector<int> keyframe_indices() const;
  ObjectTrack object_track(const std::string& object_id) const;
};

std::string demo_to_string(const DemoFile& demo);
DemoFile demo_from_string(const std::string& text);

void save_demo(const DemoFile& demo, const std::string& path);
DemoFile load_demo(const std::string& path);

}  // namespace demobot
