#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <vector>

#include "demobot/chain.hpp"
#include "demobot/errors.hpp"
#include "demobot/rng.hpp"

using namespace demobot;

namespace {

// Independent FK oracle: plain 4x4 homogeneous matrix products with the
// Rodrigues rotation formula, no shared code with KinematicChain.
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis_in, double angle) {
  const Eigen::Vector3d a = axis_in.normalized();
  Eigen::Matrix3d K;
  K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
}

std::vector<Eigen::Matrix4d> fk_matrix_oracle(const KinematicChain& chain,
                                              const Eigen::VectorXd& q) {
  std::vector<Eigen::Matrix4d> world(chain.joint_count());
  for (int i = 0; i < chain.joint_count(); ++i) {
    const Joint& j = chain.joint(i);
    Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
    local.block<3, 3>(0, 0) = j.offset.rotation.toRotationMatrix() * rodrigues(j.axis, q[i]);
    local.block<3, 1>(0, 3) = j.offset.translation;
    world[i] = (j.parent < 0) ? local : world[j.parent] * local;
  }
  return world;
}

KinematicChain one_dof_z_chain() {
  KinematicChain c("onedof");
  c.add_joint("j0", "", Eigen::Vector3d::UnitZ(), Pose(), -3.14, 3.14);
  c.add_joint("ee", "j0", Eigen::Vector3d::UnitZ(),
              Pose::from_translation({1.0, 0.0, 0.0}), 0.0, 0.0);
  c.set_end_effector("ee");
  c.set_keypoint_frames({"j0", "ee"});
  return c;
}

// 6-DoF arm with orthogonal wrist; same topology class as the shipped configs.
KinematicChain test_arm() {
  KinematicChain c("arm");
  c.add_joint("pan", "", Eigen::Vector3d::UnitZ(), Pose::from_translation({0, 0, 0.10}), -2.9,
              2.9);
  c.add_joint("lift", "pan", Eigen::Vector3d::UnitY(), Pose::from_translation({0, 0, 0.08}),
              -2.2, 2.2);
  c.add_joint("elbow", "lift", Eigen::Vector3d::UnitY(),
              Pose::from_translation({0.24, 0, 0}), -2.6, 2.6);
  c.add_joint("wrist1", "elbow", Eigen::Vector3d::UnitY(),
              Pose::from_translation({0.20, 0, 0}), -2.9, 2.9);
  c.add_joint("wrist2", "wrist1", Eigen::Vector3d::UnitZ(),
              Pose::from_translation({0.05, 0, 0}), -2.9, 2.9);
  c.add_joint("wrist3", "wrist2", Eigen::Vector3d::UnitX(),
              Pose::from_translation({0.04, 0, 0}), -2.9, 2.9);
  c.add_joint("ee", "wrist3", Eigen::Vector3d::UnitX(),
              Pose::from_translation({0.03, 0, 0}), 0.0, 0.0);
  c.set_end_effector("ee");
  c.set_keypoint_frames({"elbow", "wrist1", "ee"});
  return c;
}

KinematicChain random_tree_chain(Rng& rng, int joints) {
  KinematicChain c("rand");
  for (int i = 0; i < joints; ++i) {
    Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
    while (axis.norm() < 1e-3) axis = {rng.normal(), rng.normal(), rng.normal()};
    Eigen::Vector3d t(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    Eigen::Quaterniond qr(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    qr.normalize();
    const std::string parent = (i == 0) ? "" : "j" + std::to_string(rng.uniform_index(i));
    c.add_joint("j" + std::to_string(i), parent, axis, Pose(qr, t), -2.5, 2.5);
  }
  return c;
}

JointConfig random_config(const KinematicChain& c, Rng& rng, double margin = 0.05) {
  JointConfig q = JointConfig::zeros(c.joint_count(), c.name());
  for (int i = 0; i < c.joint_count(); ++i) {
    const Joint& j = c.joint(i);
    q.values[i] = j.fixed() ? j.lo : rng.uniform(j.lo + margin, j.hi - margin);
  }
  return q;
}

}  // namespace

TEST_CASE("fk at zero config matches home layout") {
  const KinematicChain arm = test_arm();
  const FkResult fk = arm.forward_kinematics(JointConfig::zeros(arm.joint_count()));
  CHECK(!fk.clamped);
  // Home layout: offsets accumulate along +x / +z with identity rotations.
  CHECK((fk.frames[0].translation - Eigen::Vector3d(0, 0, 0.10)).norm() < 1e-15);
  CHECK((fk.frames[1].translation - Eigen::Vector3d(0, 0, 0.18)).norm() < 1e-15);
  CHECK((fk.frames[2].translation - Eigen::Vector3d(0.24, 0, 0.18)).norm() < 1e-15);
  CHECK((fk.frames.back().translation - Eigen::Vector3d(0.56, 0, 0.18)).norm() < 1e-15);
}

TEST_CASE("one-dof chain quarter turn") {
  const KinematicChain c = one_dof_z_chain();
  JointConfig q = JointConfig::zeros(2);
  q.values[0] = M_PI / 2;
  const FkResult fk = c.forward_kinematics(q);
  CHECK((fk.frames[1].translation - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("fk matches 4x4 matrix-chain oracle on random trees") {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const KinematicChain c = random_tree_chain(rng, 3 + static_cast<int>(rng.uniform_index(8)));
    const JointConfig q = random_config(c, rng);
    const FkResult fk = c.forward_kinematics(q);
    const auto oracle = fk_matrix_oracle(c, q.values);
    for (int i = 0; i < c.joint_count(); ++i) {
      worst = std::max(worst,
                       (fk.frames[i].translation - oracle[i].block<3, 1>(0, 3).eval()).norm());
      worst = std::max(worst, (fk.frames[i].rotation.toRotationMatrix() -
                               oracle[i].block<3, 3>(0, 0))
                                  .norm());
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("fk clamps and flags out-of-limit values") {
  const KinematicChain c = one_dof_z_chain();
  JointConfig q = JointConfig::zeros(2);
  q.values[0] = 10.0;
  const FkResult fk = c.forward_kinematics(q);
  CHECK(fk.clamped);
  REQUIRE(fk.clamped_joints.size() == 1);
  CHECK(fk.clamped_joints[0] == 0);
  JointConfig q_lim = JointConfig::zeros(2);
  q_lim.values[0] = 3.14;
  const FkResult fk_lim = c.forward_kinematics(q_lim);
  CHECK((fk.frames[1].translation - fk_lim.frames[1].translation).norm() < 1e-12);
}

TEST_CASE("fk rejects mismatched config length") {
  const KinematicChain c = one_dof_z_chain();
  CHECK_THROWS_AS(c.forward_kinematics(JointConfig::zeros(5)), ContractViolation);
  JointConfig wrong_chain = JointConfig::zeros(2, "other");
  CHECK_THROWS_AS(c.forward_kinematics(wrong_chain), ContractViolation);
}

TEST_CASE("joint_positions_3d projects fk translations in keypoint order") {
  Rng rng(33);
  const KinematicChain arm = test_arm();
  const JointConfig q = random_config(arm, rng);
  const auto pts = arm.joint_positions_3d(q);
  const FkResult fk = arm.forward_kinematics(q);
  REQUIRE(pts.size() == 3);
  CHECK((pts[0] - fk.frames[arm.frame_index("elbow")].translation).norm() == 0.0);
  CHECK((pts[1] - fk.frames[arm.frame_index("wrist1")].translation).norm() == 0.0);
  CHECK((pts[2] - fk.frames[arm.frame_index("ee")].translation).norm() == 0.0);
}

TEST_CASE("perturbing a joint moves only distal keypoints") {
  Rng rng(44);
  const KinematicChain arm = test_arm();
  JointConfig q = random_config(arm, rng);
  auto before = arm.joint_positions_3d(q);
  q.values[3] += 0.2;  // wrist1: elbow and wrist1 keypoints are not distal to it
  auto after = arm.joint_positions_3d(q);
  CHECK((before[0] - after[0]).norm() == 0.0);
  CHECK((before[1] - after[1]).norm() == 0.0);
  CHECK((before[2] - after[2]).norm() > 1e-6);
}

TEST_CASE("jacobian linear column is omega cross r") {
  const KinematicChain c = one_dof_z_chain();
  const Eigen::MatrixXd J = c.jacobian(JointConfig::zeros(2), "ee");
  CHECK((J.block<3, 1>(0, 0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((J.block<3, 1>(3, 0) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
  // Fixed ee "joint" is still a column; it is ancestral to itself.
  CHECK(J.cols() == 2);
}

TEST_CASE("jacobian column of non-ancestral joint is zero") {
  Rng rng(55);
  // Build a Y-shaped tree: j0 -> {j1, j2}.
  KinematicChain c("tree");
  c.add_joint("j0", "", Eigen::Vector3d::UnitZ(), Pose(), -2, 2);
  c.add_joint("j1", "j0", Eigen::Vector3d::UnitY(), Pose::from_translation({0.3, 0, 0}), -2, 2);
  c.add_joint("j2", "j0", Eigen::Vector3d::UnitX(), Pose::from_translation({0, 0.3, 0}), -2, 2);
  const JointConfig q(Eigen::Vector3d(0.3, -0.7, 1.1), "tree");
  const Eigen::MatrixXd J = c.jacobian(q, "j1");
  CHECK(J.col(2).norm() == 0.0);
  CHECK(J.col(0).norm() > 0.0);
}

TEST_CASE("jacobian matches central finite differences over random chains") {
  Rng rng(202);
  const double h = 1e-6;
  double worst_rel = 0.0;
  int samples = 0;
  while (samples < 1000) {
    const KinematicChain c = random_tree_chain(rng, 4 + static_cast<int>(rng.uniform_index(5)));
    for (int rep = 0; rep < 5; ++rep, ++samples) {
      const JointConfig q = random_config(c, rng);
      const int frame = c.joint_count() - 1;
      const Eigen::MatrixXd J = c.jacobian(q, frame);
      Eigen::MatrixXd J_fd(6, c.joint_count());
      for (int j = 0; j < c.joint_count(); ++j) {
        JointConfig qp = q, qm = q;
        qp.values[j] += h;
        qm.values[j] -= h;
        const Pose fp = c.forward_kinematics(qp).frames[frame];
        const Pose fm = c.forward_kinematics(qm).frames[frame];
        J_fd.block<3, 1>(0, j) = (fp.translation - fm.translation) / (2 * h);
        J_fd.block<3, 1>(3, j) =
            rotation_log(fp.rotation * fm.rotation.conjugate()) / (2 * h);
      }
      const double scale = std::max(1.0, J.norm());
      worst_rel = std::max(worst_rel, (J - J_fd).norm() / scale);
    }
  }
  CHECK(worst_rel < 1e-5);
}

TEST_CASE("jacobian rejects unknown frame") {
  const KinematicChain c = one_dof_z_chain();
  CHECK_THROWS_AS(c.jacobian(JointConfig::zeros(2), "nope"), ConfigError);
}

TEST_CASE("ik fixed point returns the seed") {
  Rng rng(66);
  const KinematicChain arm = test_arm();
  const JointConfig q0 = random_config(arm, rng);
  const Pose target = arm.forward_kinematics(q0).frames[arm.end_effector_index()];
  const IkResult r = arm.solve_ik(target, q0);
  CHECK(r.converged);
  CHECK(r.pos_error < 1e-9);
  CHECK((r.q.values - q0.values).norm() < 1e-9);
}

TEST_CASE("ik round trip on 500 reachable targets") {
  Rng rng(77);
  const KinematicChain arm = test_arm();
  int converged = 0;
  for (int i = 0; i < 500; ++i) {
    const JointConfig q_star = random_config(arm, rng, 0.2);
    const Pose target = arm.forward_kinematics(q_star).frames[arm.end_effector_index()];
    JointConfig q_init = q_star;
    for (int j = 0; j < q_init.size(); ++j) q_init.values[j] += rng.uniform(-0.3, 0.3);
    q_init = arm.clamp(q_init);
    // Converged at these tolerances is exactly "residual < 1e-4 m, 1e-3 rad".
    IkParams params;
    params.max_iters = 400;
    params.tol_pos = 1e-4;
    params.tol_rot = 1e-3;
    const IkResult r = arm.solve_ik(target, q_init, params);
    CHECK(arm.within_limits(r.q, 1e-12));
    if (r.converged && r.pos_error < 1e-4 && r.rot_error < 1e-3) ++converged;
  }
  CHECK(converged >= 495);  // >= 99%
}

TEST_CASE("ik on unreachable target does not diverge") {
  const KinematicChain arm = test_arm();
  const double reach = arm.path_length(arm.end_effector_index());
  const Pose target = Pose::from_translation({2.0 * reach, 0, 0.1});
  IkParams params;
  params.max_iters = 150;
  const IkResult r = arm.solve_ik(target, JointConfig::zeros(arm.joint_count()), params);
  CHECK(!r.converged);
  CHECK(r.pos_error > 0.1);
  REQUIRE(r.error_trace.size() >= 2);
  const size_t n = r.error_trace.size();
  const size_t lookback = std::min<size_t>(10, n - 1);
  for (size_t i = n - lookback; i < n; ++i)
    CHECK(r.error_trace[i] <= r.error_trace[i - 1] + 1e-12);
  CHECK(arm.within_limits(r.q, 1e-12));
}

TEST_CASE("ik never returns q outside joint limits") {
  Rng rng(88);
  const KinematicChain arm = test_arm();
  for (int i = 0; i < 50; ++i) {
    const Pose target(Eigen::Quaterniond::UnitRandom(),
                      {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(0, 0.8)});
    const IkResult r = arm.solve_ik(target, random_config(arm, rng));
    CHECK(arm.within_limits(r.q, 1e-12));
  }
}

TEST_CASE("attached chain composes fk of both parts") {
  const KinematicChain arm = test_arm();
  KinematicChain tool("tool");
  tool.add_joint("flip", "", Eigen::Vector3d::UnitY(),
                 Pose::from_translation({0.05, 0, 0}), -1.0, 1.0);
  const KinematicChain combo = arm.attached(tool, "ee", "tool_");
  REQUIRE(combo.joint_count() == arm.joint_count() + 1);
  JointConfig q = JointConfig::zeros(combo.joint_count());
  q.values[combo.frame_index("tool_flip")] = 0.5;
  const FkResult fk = combo.forward_kinematics(q);
  JointConfig q_arm = JointConfig::zeros(arm.joint_count());
  const Pose ee = arm.forward_kinematics(q_arm).frames[arm.end_effector_index()];
  const Pose expected =
      ee * Pose::from_translation({0.05, 0, 0}) * Pose::from_axis_angle({0, 1, 0}, 0.5);
  CHECK((fk.frames[combo.frame_index("tool_flip")].translation - expected.translation).norm() <
        1e-12);
}
