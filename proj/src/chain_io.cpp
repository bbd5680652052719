#include "demobot/chain_io.hpp"

#include <fstream>

#include "demobot/errors.hpp"

namespace demobot {

namespace {

Eigen::Vector3d vec3_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + ": expected 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Pose pose_from_json(const nlohmann::json& j) {
  Pose p;
  if (j.contains("quat")) {
    const auto& q = j.at("quat");
    if (!q.is_array() || q.size() != 4) throw ConfigError("pose quat: expected [w,x,y,z]");
    p.rotation = Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                    q[3].get<double>());
    if (std::abs(p.rotation.norm() - 1.0) > 1e-6)
      throw ConfigError("pose quat is not unit-norm");
    p.rotation.normalize();
  }
  if (j.contains("trans")) p.translation = vec3_from_json(j.at("trans"), "pose trans");
  return p;
}

nlohmann::json pose_to_json(const Pose& p) {
  return {{"quat", {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}},
          {"trans", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

KinematicChain chain_from_json(const nlohmann::json& j) {
  if (j.value("version", -1) != kChainFileVersion)
    throw ConfigError("chain file: unsupported or missing version");
  KinematicChain chain(j.value("name", std::string("chain")));
  if (!j.contains("joints") || !j.at("joints").is_array())
    throw ConfigError("chain file: missing joints array");
  for (const auto& rec : j.at("joints")) {
    for (const char* field :
         {"name", "parent", "axis", "offset_translation", "offset_rotation_quat", "limits"})
      if (!rec.contains(field))
        throw ConfigError(std::string("chain joint record missing field '") + field + "'");
    const auto& quat = rec.at("offset_rotation_quat");
    if (!quat.is_array() || quat.size() != 4)
      throw ConfigError("offset_rotation_quat: expected [w,x,y,z]");
    Pose offset(Eigen::Quaterniond(quat[0].get<double>(), quat[1].get<double>(),
                                   quat[2].get<double>(), quat[3].get<double>()),
                vec3_from_json(rec.at("offset_translation"), "offset_translation"));
    const auto& lims = rec.at("limits");
    if (!lims.is_array() || lims.size() != 2) throw ConfigError("limits: expected [lo,hi]");
    chain.add_joint(rec.at("name").get<std::string>(), rec.at("parent").get<std::string>(),
                    vec3_from_json(rec.at("axis"), "axis"), offset, lims[0].get<double>(),
                    lims[1].get<double>());
  }
  if (j.contains("keypoint_frames"))
    chain.set_keypoint_frames(j.at("keypoint_frames").get<std::vector<std::string>>());
  if (j.contains("end_effector"))
    chain.set_end_effector(j.at("end_effector").get<std::string>());
  return chain;
}

nlohmann::json chain_to_json(const KinematicChain& chain) {
  nlohmann::json joints = nlohmann::json::array();
  for (const Joint& jt : chain.joints()) {
    joints.push_back(
        {{"name", jt.name},
         {"parent", jt.parent < 0 ? "" : chain.joint(jt.parent).name},
         {"axis", {jt.axis.x(), jt.axis.y(), jt.axis.z()}},
         {"offset_translation",
          {jt.offset.translation.x(), jt.offset.translation.y(), jt.offset.translation.z()}},
         {"offset_rotation_quat",
          {jt.offset.rotation.w(), jt.offset.rotation.x(), jt.offset.rotation.y(),
           jt.offset.rotation.z()}},
         {"limits", {jt.lo, jt.hi}}});
  }
  nlohmann::json out = {{"version", kChainFileVersion},
                        {"name", chain.name()},
                        {"joints", std::move(joints)},
                        {"keypoint_frames", chain.keypoint_frames()}};
  if (!chain.end_effector().empty()) out["end_effector"] = chain.end_effector();
  return out;
}

KinematicChain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chain file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("chain file " + path + ": " + e.what());
  }
  return chain_from_json(j);
}

void save_chain(const KinematicChain& chain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write chain file: " + path);
  out << chain_to_json(chain).dump(2) << "\n";
}

}  // namespace demobot
