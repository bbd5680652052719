#include "demobot/presets.hpp"

#include "demobot/hand_model.hpp"

namespace demobot {

KinematicChain make_arm_chain() {
  KinematicChain c("arm6");
  c.add_joint("pan", "", Eigen::Vector3d::UnitZ(), Pose::from_translation({0, 0, 0.12}), -2.9,
              2.9);
  c.add_joint("lift", "pan", Eigen::Vector3d::UnitY(), Pose::from_translation({0, 0, 0.10}),
              -2.2, 2.2);
  c.add_joint("roll", "lift", Eigen::Vector3d::UnitX(), Pose::from_translation({0.12, 0, 0}),
              -2.9, 2.9);
  c.add_joint("elbow", "roll", Eigen::Vector3d::UnitY(), Pose::from_translation({0.18, 0, 0}),
              -2.6, 2.6);
  c.add_joint("wrist1", "elbow", Eigen::Vector3d::UnitY(),
              Pose::from_translation({0.25, 0, 0}), -2.9, 2.9);
  c.add_joint("wrist2", "wrist1", Eigen::Vector3d::UnitZ(),
              Pose::from_translation({0.05, 0, 0}), -2.9, 2.9);
  c.add_joint("wrist3", "wrist2", Eigen::Vector3d::UnitX(),
              Pose::from_translation({0.045, 0, 0}), -2.9, 2.9);
  c.add_joint("ee", "wrist3", Eigen::Vector3d::UnitX(), Pose::from_translation({0.035, 0, 0}),
              0.0, 0.0);
  c.set_end_effector("ee");
  c.set_keypoint_frames({"ee"});
  return c;
}

KinematicChain make_robot_hand_chain() {
  KinematicChain c("robot_hand");
  c.add_joint("palm", "", Eigen::Vector3d::UnitZ(), Pose(), 0.0, 0.0);

  const Eigen::Vector3d flex(-1.0, 0.0, 0.0);
  struct F {
    const char* name;
    Eigen::Vector3d root;
    Eigen::Quaterniond pre;
    double proximal;
    double distal;
  };
  const Eigen::Quaterniond thumb_pre =
      Eigen::Quaterniond(Eigen::AngleAxisd(-0.9, Eigen::Vector3d::UnitZ())) *
      Eigen::Quaterniond(Eigen::AngleAxisd(-0.5, Eigen::Vector3d::UnitY()));
  const F fingers[] = {
      {"thumb", {-0.027, 0.020, 0.0}, thumb_pre, 0.046, 0.038},
      {"index", {-0.023, 0.088, 0.0}, Eigen::Quaterniond::Identity(), 0.049, 0.041},
      {"middle", {0.000, 0.092, 0.0}, Eigen::Quaterniond::Identity(), 0.052, 0.043},
      {"ring", {0.023, 0.088, 0.0}, Eigen::Quaterniond::Identity(), 0.049, 0.041},
  };
  std::vector<std::string> kps = {"palm"};
  for (const F& f : fingers) {
    const std::string n = f.name;
    c.add_joint(n + "_j1", "palm", flex, Pose(f.pre, f.root), -0.30, 1.90);
    c.add_joint(n + "_j2", n + "_j1", flex, Pose::from_translation({0, f.proximal, 0}), -0.30,
                1.90);
    c.add_joint(n + "_tip", n + "_j2", flex, Pose::from_translation({0, f.distal, 0}), 0.0,
                0.0);
    kps.push_back(n + "_j1");
    kps.push_back(n + "_j2");
    kps.push_back(n + "_tip");
  }
  c.set_keypoint_frames(kps);
  c.set_end_effector("palm");
  return c;
}

RetargetMap make_default_retarget_map() {
  // Human layout: wrist, then 4 keypoints per finger (mcp/pip/dip/tip) for
  // thumb..pinky. Robot layout: palm, then 3 per finger (j1/j2/tip) for
  // thumb..ring.
  RetargetMap map;
  map.robot_keypoint.assign(HandModel::kKeypoints, -1);
  map.robot_keypoint[0] = 0;
  for (int f = 0; f < 4; ++f) {
    map.robot_keypoint[1 + 4 * f + 0] = 1 + 3 * f + 0;  // mcp -> j1
    map.robot_keypoint[1 + 4 * f + 1] = 1 + 3 * f + 1;  // pip -> j2
    map.robot_keypoint[1 + 4 * f + 3] = 1 + 3 * f + 2;  // tip -> tip
  }
  return map;
}

Pose make_hand_mount() {
  Eigen::Matrix3d R;
  R.col(2) = Eigen::Vector3d::UnitX();   // palm z
  R.col(1) = Eigen::Vector3d::UnitZ();   // fingers
  R.col(0) = R.col(1).cross(R.col(2));
  return Pose(Eigen::Quaterniond(R), Eigen::Vector3d::Zero());
}

Pose make_lookat_pose(const Eigen::Vector3d& position, const Eigen::Vector3d& target) {
  const Eigen::Vector3d z = (target - position).normalized();
  Eigen::Vector3d up(0, 0, 1);
  if (std::abs(z.dot(up)) > 0.99) up = Eigen::Vector3d(0, 1, 0);
  const Eigen::Vector3d x = z.cross(-up).normalized();  // +y down in image
  const Eigen::Vector3d y = z.cross(x).normalized();
  Eigen::Matrix3d R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return Pose(Eigen::Quaterniond(R), position);
}

}  // namespace demobot
