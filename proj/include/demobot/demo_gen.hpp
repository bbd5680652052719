#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "demobot/camera.hpp"
#include "demobot/demo_io.hpp"
#include "demobot/hand_model.hpp"
#include "demobot/segments.hpp"

namespace demobot {

enum class TaskKind { SyncAssembly, AsyncAssembly, SingleArmMultiStep };

const char* task_kind_name(TaskKind k);
TaskKind task_kind_from_name(const std::string& name);

struct HandWaypoint {
  int frame = 0;
  Pose wrist;
};

// While carried, the wrist rigidly follows the object with the offset
// latched at the span's first frame.
struct CarrySpan {
  int frame_start = 0;
  int frame_end = 0;  // inclusive
};

struct ApertureKey {
  int frame = 0;
  double value = 0.0;  // 0 open .. 1 closed
};

struct ObjectWaypoint {
  int frame = 0;
  Pose pose;
};

struct ScriptKeyframe {
  int frame = 0;
  SegmentPhase phase = SegmentPhase::Goal;
  bool is_switch = false;
};

struct HandScript {
  std::vector<HandWaypoint> waypoints;
  std::vector<CarrySpan> carries;
  std::vector<ApertureKey> aperture;
};

// Declarative demonstration script: object motion schedule, per-hand
// waypoint/aperture schedules, keyframes, and the capture setup.
struct TaskScript {
  TaskKind kind = TaskKind::SyncAssembly;
  double fps = 30.0;
  int frames = 0;  // frame count (T+1)
  std::vector<HandScript> hands;  // [left, right]
  std::vector<ObjectWaypoint> object;
  std::vector<ScriptKeyframe> keyframes;
  std::vector<std::pair<int, int>> contact_windows;  // inclusive frame ranges
  Camera camera;
  double hand_scale = 1.0;

  int subgoal_count() const { return static_cast<int>(keyframes.size()); }
  void validate() const;
};

struct NoiseSpec {
  double det2d_sigma = 0.0;     // px
  double obj_trans_sigma = 0.0; // m
  double obj_rot_sigma = 0.0;   // rad
  double obj_bias = 0.0;        // m, fixed direction drawn once per demo
  double dropout_prob = 0.0;

  void validate() const;
  bool is_zero() const;
};

// Scene constants shared between the task scripts and the environment
// configuration.
struct TaskGeometry {
  double table_z = 0.0;
  Eigen::Vector3d peg_start_pos{0.0, 0.0, 0.02};
  double peg_radius = 0.02;
  double peg_half_len = 0.12;
  Eigen::Vector3d hole_base_center{0.0, 0.10, 0.05};
  Eigen::Vector3d hole_base_half_extents{0.05, 0.05, 0.05};
  double insert_depth = 0.04;
  double open_aperture = 0.12;
  double closed_aperture = 0.85;
  double fps = 30.0;

  Eigen::Vector3d hole_entry() const {
    return hole_base_center + Eigen::Vector3d(0, 0, hole_base_half_extents.z());
  }
  Eigen::Vector3d inserted_center() const {
    return hole_entry() + Eigen::Vector3d(0, 0, peg_half_len - insert_depth);
  }
};

TaskScript make_task_script(TaskKind kind, const TaskGeometry& geom, const Camera& camera,
                            double hand_scale = 1.0);

struct SynthResult {
  DemoFile demo;
  DemoFile ground_truth;
  // Per hand, per frame: the true hand parameters behind the detections.
  std::vector<std::vector<HandParams>> hand_truth;
};

// Deterministic in (script, noise, seed); with zero noise the demo equals
// the ground truth bit-for-bit.
SynthResult synth_demo(const TaskScript& script, const NoiseSpec& noise, std::uint64_t seed);

// Shared interpolation (minimum-jerk time blend, slerp for rotations).
double min_jerk_blend(double tau);
Pose interpolate_pose(const Pose& a, const Pose& b, double s);

}  // namespace demobot
