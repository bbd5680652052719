#pragma once

#include <string>

#include <json.hpp>

#include "demobot/chain.hpp"

namespace demobot {

// Chain definition files are JSON with one record per joint:
//   {"name", "parent", "axis": [x,y,z], "offset_translation": [m,m,m],
//    "offset_rotation_quat": [w,x,y,z], "limits": [lo,hi]}
// plus "keypoint_frames": [...] and "end_effector". Files carry a "version"
// field; unknown versions are rejected.
inline constexpr int kChainFileVersion = 1;

KinematicChain chain_from_json(const nlohmann::json& j);
nlohmann::json chain_to_json(const KinematicChain& chain);

KinematicChain load_chain(const std::string& path);
void save_chain(const KinematicChain& chain, const std::string& path);

// Shared pose <-> json helpers ({"quat": [w,x,y,z], "trans": [x,y,z]}).
Pose pose_from_json(const nlohmann::json& j);
nlohmann::json pose_to_json(const Pose& p);

}  // namespace demobot
