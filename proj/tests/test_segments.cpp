#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "demobot/presets.hpp"
#include "demobot/rng.hpp"
#include "demobot/segments.hpp"

using namespace demobot;

namespace {

// A hand-base sweep between two poses taken from the arm's own fk, so every
// intermediate target is comfortably inside the workspace.
struct Fixture {
  KinematicChain arm = make_arm_chain();
  KinematicChain hand = make_robot_hand_chain();
  Pose arm_base = Pose::from_translation({0.3, -0.2, 0.0});

  Pose fk_pose(std::initializer_list<double> angles) const {
    JointConfig q = JointConfig::zeros(arm.joint_count(), arm.name());
    int i = 0;
    for (double a : angles) q.values[i++] = a;
    return arm_base * arm.forward_kinematics(q).frames[arm.end_effector_index()];
  }

  HandMotion motion(int frames) const {
    HandMotion m;
    m.arm = &arm;
    m.hand = &hand;
    m.arm_base = arm_base;
    const Pose a = fk_pose({0.4, -0.5, 0.2, 1.0, -0.4, 0.1, 0.0});
    const Pose b = fk_pose({-0.3, -0.9, -0.2, 1.6, -0.7, -0.3, 0.4});
    for (int t = 0; t < frames; ++t) {
      const double s = static_cast<double>(t) / (frames - 1);
      Pose p;
      p.translation = (1 - s) * a.translation + s * b.translation;
      p.rotation = a.rotation.slerp(s, b.rotation);
      m.p_base.push_back(p);
      JointConfig q = JointConfig::zeros(hand.joint_count(), hand.name());
      for (int j = 0; j < hand.joint_count(); ++j)
        if (!hand.joint(j).fixed()) q.values[j] = 0.8 * s;
      m.q_hand.push_back(q);
    }
    return m;
  }

  ObjectTrack track(int frames) const {
    ObjectTrack tr;
    tr.object_id = "peg";
    for (int t = 0; t < frames; ++t) {
      tr.stamps.push_back(t / 30.0);
      tr.poses.push_back(Pose::from_translation({0.0, 0.01 * t, 0.02}));
    }
    return tr;
  }
};

}  // namespace

TEST_CASE("single keyframe at T yields exactly one segment covering everything") {
  Fixture fx;
  const int T = 60;
  const auto result = build_segments({fx.motion(T + 1)}, fx.track(T + 1),
                                     {{T, SegmentPhase::Goal, false}});
  REQUIRE(result.segments.size() == 1);
  CHECK(static_cast<int>(result.segments[0].base_actions.size()) == T + 1);
  CHECK(result.segments[0].source_keyframe == T);
  CHECK(result.report.ok);
}

TEST_CASE("keyframes partition the trajectory with boundary frames closing segments") {
  Fixture fx;
  const int T = 100;
  const auto result = build_segments(
      {fx.motion(T + 1)}, fx.track(T + 1),
      {{30, SegmentPhase::GraspLift, false}, {70, SegmentPhase::Goal, false},
       {100, SegmentPhase::Goal, false}});
  REQUIRE(result.segments.size() == 3);
  CHECK(result.segments[0].base_actions.size() == 31);
  CHECK(result.segments[1].base_actions.size() == 40);
  CHECK(result.segments[2].base_actions.size() == 30);
  // Concatenated buffers reproduce q_0..q_T: rebuild with a single keyframe
  // and compare frame by frame.
  const auto whole = build_segments({fx.motion(T + 1)}, fx.track(T + 1),
                                    {{100, SegmentPhase::Goal, false}});
  std::vector<Eigen::VectorXd> cat;
  for (const auto& s : result.segments)
    for (const auto& a : s.base_actions) cat.push_back(a);
  REQUIRE(cat.size() == whole.segments[0].base_actions.size());
  for (size_t i = 0; i < cat.size(); ++i)
    CHECK((cat[i] - whole.segments[0].base_actions[i]).norm() == 0.0);
}

TEST_CASE("segment goals equal the object pose at their keyframe exactly") {
  Fixture fx;
  const int T = 50;
  const ObjectTrack track = fx.track(T + 1);
  const auto result = build_segments({fx.motion(T + 1)}, track,
                                     {{20, SegmentPhase::GraspLift, false},
                                      {50, SegmentPhase::Goal, false}});
  REQUIRE(result.segments.size() == 2);
  CHECK((result.segments[0].goal.translation - track.poses[20].translation).norm() == 0.0);
  CHECK((result.segments[1].goal.translation - track.poses[50].translation).norm() == 0.0);
}

TEST_CASE("missing final keyframe is appended with a warning") {
  Fixture fx;
  const int T = 40;
  const auto result =
      build_segments({fx.motion(T + 1)}, fx.track(T + 1), {{20, SegmentPhase::Goal, false}});
  REQUIRE(result.segments.size() == 2);
  CHECK(result.segments.back().source_keyframe == T);
  REQUIRE(!result.report.warnings.empty());
  CHECK(result.report.warnings[0].find("appended") != std::string::npos);
}

TEST_CASE("full-body layout stacks arm then hand joints per hand") {
  Fixture fx;
  const int T = 10;
  const HandMotion single = fx.motion(T + 1);
  const auto result =
      build_segments({single, single}, fx.track(T + 1), {{T, SegmentPhase::Goal, false}});
  const int arm_dofs = fx.arm.movable_count();
  const int hand_dofs = fx.hand.movable_count();
  REQUIRE(result.segments[0].base_actions[0].size() == 2 * (arm_dofs + hand_dofs));
  // Hand joints are copied verbatim from the retargeted configs.
  const auto movable = fx.hand.movable_joints();
  for (int t = 0; t <= T; ++t) {
    const Eigen::VectorXd& q = result.segments[0].base_actions[t];
    for (size_t m = 0; m < movable.size(); ++m) {
      CHECK(q[arm_dofs + m] == single.q_hand[t].values[movable[m]]);
      CHECK(q[arm_dofs + hand_dofs + arm_dofs + m] == single.q_hand[t].values[movable[m]]);
    }
  }
}

TEST_CASE("bimanual build equals independent per-hand builds") {
  Fixture fx;
  const int T = 30;
  const HandMotion m = fx.motion(T + 1);
  const std::vector<KeyframeInfo> kfs = {{15, SegmentPhase::GraspLift, false},
                                         {30, SegmentPhase::Goal, false}};
  const auto joint = build_segments({m, m}, fx.track(T + 1), kfs);
  const auto solo = build_segments({m}, fx.track(T + 1), kfs);
  const int dofs = fx.arm.movable_count() + fx.hand.movable_count();
  for (size_t s = 0; s < joint.segments.size(); ++s) {
    for (size_t t = 0; t < joint.segments[s].base_actions.size(); ++t) {
      const Eigen::VectorXd& qj = joint.segments[s].base_actions[t];
      const Eigen::VectorXd& qs = solo.segments[s].base_actions[t];
      CHECK((qj.head(dofs) - qs).norm() == 0.0);
      CHECK((qj.tail(dofs) - qs).norm() == 0.0);
    }
  }
}

TEST_CASE("ik stays accurate along the sweep") {
  Fixture fx;
  const auto result =
      build_segments({fx.motion(121)}, fx.track(121), {{120, SegmentPhase::Goal, false}});
  CHECK(result.report.ok);
  CHECK(result.report.max_pos_residual < 1e-4);
}

TEST_CASE("unreachable base poses fail the build with a residual report") {
  Fixture fx;
  HandMotion m = fx.motion(31);
  for (auto& p : m.p_base) p.translation += Eigen::Vector3d(0, 0, 2.0);  // far above reach
  const auto result = build_segments({m}, fx.track(31), {{30, SegmentPhase::Goal, false}});
  CHECK(!result.report.ok);
  CHECK(result.report.max_pos_residual > 0.01);
  CHECK(!result.report.warnings.empty());
}

TEST_CASE("keyframes outside the trajectory are contract violations") {
  Fixture fx;
  CHECK_THROWS_AS(
      build_segments({fx.motion(11)}, fx.track(11), {{20, SegmentPhase::Goal, false}}),
      ContractViolation);
}

TEST_CASE("segments file round trip is byte identical") {
  Fixture fx;
  const int T = 25;
  auto result = build_segments({fx.motion(T + 1)}, fx.track(T + 1),
                               {{10, SegmentPhase::GraspLift, false},
                                {25, SegmentPhase::Goal, true}});
  const int dim = static_cast<int>(result.segments[0].base_actions[0].size());
  const std::string s1 = segments_to_string(result.segments, dim);
  const auto parsed = segments_from_string(s1);
  const std::string s2 = segments_to_string(parsed, dim);
  CHECK(s1 == s2);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].is_switch);
  CHECK(parsed[0].phase == SegmentPhase::GraspLift);
}

TEST_CASE("keyframe flag codec round trips") {
  for (SegmentPhase p : {SegmentPhase::Reach, SegmentPhase::GraspLift, SegmentPhase::Goal}) {
    for (bool sw : {false, true}) {
      const int flag = keyframe_flag_from(p, sw);
      CHECK(segment_phase_from_flag(flag) == p);
      CHECK(segment_switch_from_flag(flag) == sw);
    }
  }
  CHECK_THROWS_AS(segment_phase_from_flag(0), ConfigError);
}
