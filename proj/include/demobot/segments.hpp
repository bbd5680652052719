#pragma once

#include <string>
#include <vector>

#include "demobot/chain.hpp"
#include "demobot/observations.hpp"
#include "demobot/se3.hpp"

namespace demobot {

enum class SegmentPhase { Reach, GraspLift, Goal };

const char* segment_phase_name(SegmentPhase p);
SegmentPhase segment_phase_from_name(const std::string& name);
SegmentPhase segment_phase_from_flag(int keyframe_flag);
bool segment_switch_from_flag(int keyframe_flag);
int keyframe_flag_from(SegmentPhase p, bool is_switch);

// One temporal slice of the demonstration: the base-action buffer for its
// frames and the object sub-goal at its closing keyframe. The boundary
// frame belongs to the closing segment.
struct Segment {
  std::vector<Eigen::VectorXd> base_actions;  // full-body targets, radians
  Pose goal;
  int index = 0;
  int source_keyframe = 0;
  SegmentPhase phase = SegmentPhase::Goal;
  bool is_switch = false;
};

struct KeyframeInfo {
  int frame = 0;
  SegmentPhase phase = SegmentPhase::Goal;
  bool is_switch = false;
};

// Retargeted per-frame track of one hand plus the arm that must realize its
// base pose. `arm_base` is the world pose of the arm chain's root.
struct HandMotion {
  const KinematicChain* arm = nullptr;
  const KinematicChain* hand = nullptr;
  Pose arm_base;
  std::vector<Pose> p_base;            // world hand-base targets, one per frame
  std::vector<JointConfig> q_hand;     // robot hand configs, one per frame
  JointConfig q_arm_init;              // IK seed for frame 0 (defaults to zeros)
};

struct SegmentBuildReport {
  int frames = 0;
  int ik_converged = 0;
  double max_pos_residual = 0.0;  // m
  double max_rot_residual = 0.0;  // rad
  std::vector<std::string> warnings;
  bool ok = true;
};

struct BuildSegmentsResult {
  std::vector<Segment> segments;
  SegmentBuildReport report;
};

// Algorithm: replay the trajectory frame by frame, solving arm IK toward
// each hand-base target (warm-started from the previous frame), stacking
// full-body configurations into a buffer, and emitting one segment with the
// object pose as sub-goal at every keyframe. Segments partition [0, T].
//
// The full-body layout is, per hand in order: movable arm joints, then
// movable hand joints.
//
// The build fails (ok = false) if any frame's IK position residual exceeds
// `fail_residual`; unconverged frames below that only produce warnings.
BuildSegmentsResult build_segments(const std::vector<HandMotion>& hands,
                                   const ObjectTrack& obj_track,
                                   std::vector<KeyframeInfo> keyframes,
                                   const IkParams& ik_params = {},
                                   double fail_residual = 0.01);

// Full-body vector layout helper.
int full_body_dim(const std::vector<HandMotion>& hands);

inline constexpr int kSegmentsFileVersion = 1;

std::string segments_to_string(const std::vector<Segment>& segments, int joint_dim);
std::vector<Segment> segments_from_string(const std::string& text);
void save_segments(const std::vector<Segment>& segments, int joint_dim,
                   const std::string& path);
std::vector<Segment> load_segments(const std::string& path);

}  // namespace demobot
