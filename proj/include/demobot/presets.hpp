#pragma once

#include "demobot/camera.hpp"
#include "demobot/chain.hpp"
#include "demobot/retarget.hpp"

namespace demobot {

// Desk-scale 7-DoF arm: pan/lift/upper-arm-roll/elbow plus an orthogonal wrist
// triad, with a fixed "ee" frame the hand mounts on. Reach is roughly 0.68 m.
KinematicChain make_arm_chain();

// 4-finger robot hand (thumb/index/middle/ring, two flexion joints each),
// palm root frame, keypoints: palm + per finger {mcp, mid, tip}.
KinematicChain make_robot_hand_chain();

// Human 21-keypoint -> robot 13-keypoint correspondence (DIPs and the pinky
// have no robot counterpart).
RetargetMap make_default_retarget_map();

// World-from-camera pose with +z optical axis toward `target`, +y down.
Pose make_lookat_pose(const Eigen::Vector3d& position, const Eigen::Vector3d& target);

// Palm frame expressed in the arm's end-effector frame: palm z along the
// flange +x, fingers along flange +z. Chosen so all three task scripts stay
// inside the arm's dexterous workspace.
Pose make_hand_mount();

}  // namespace demobot
