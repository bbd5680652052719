#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "demobot/demo_gen.hpp"
#include "demobot/presets.hpp"
#include "demobot/rng.hpp"

using namespace demobot;

namespace {

Camera scene_camera() {
  Camera cam;
  cam.K = {600, 600, 320, 240};
  cam.pose = make_lookat_pose({0.0, -0.9, 0.7}, {0.0, 0.05, 0.1});
  return cam;
}

TaskScript sync_script() {
  return make_task_script(TaskKind::SyncAssembly, TaskGeometry{}, scene_camera());
}

}  // namespace

TEST_CASE("sync script has 5 sub-goals, async 11") {
  CHECK(sync_script().subgoal_count() == 5);
  const TaskScript async_s =
      make_task_script(TaskKind::AsyncAssembly, TaskGeometry{}, scene_camera());
  CHECK(async_s.subgoal_count() == 11);
  const TaskScript single =
      make_task_script(TaskKind::SingleArmMultiStep, TaskGeometry{}, scene_camera());
  CHECK(single.subgoal_count() == 7);
}

TEST_CASE("zero noise demo equals ground truth bit for bit") {
  const SynthResult r = synth_demo(sync_script(), NoiseSpec{}, 42);
  CHECK(demo_to_string(r.demo) == demo_to_string(r.ground_truth));
}

TEST_CASE("same seed gives identical files, different seed differs") {
  NoiseSpec noise;
  noise.det2d_sigma = 1.0;
  noise.obj_trans_sigma = 0.002;
  noise.obj_bias = 0.02;
  const TaskScript script = sync_script();
  const SynthResult a = synth_demo(script, noise, 7);
  const SynthResult b = synth_demo(script, noise, 7);
  const SynthResult c = synth_demo(script, noise, 8);
  CHECK(demo_to_string(a.demo) == demo_to_string(b.demo));
  CHECK(demo_to_string(a.demo) != demo_to_string(c.demo));
  CHECK(demo_to_string(a.ground_truth) == demo_to_string(c.ground_truth));
}

TEST_CASE("detection noise matches its declared sigma") {
  NoiseSpec noise;
  noise.det2d_sigma = 1.0;
  const TaskScript script = sync_script();
  const SynthResult r = synth_demo(script, noise, 3);
  double sum_sq = 0.0;
  long n = 0;
  for (size_t t = 0; t < r.demo.frames.size(); ++t) {
    for (int h = 0; h < 2; ++h) {
      const auto& noisy = h == 0 ? r.demo.frames[t].left : r.demo.frames[t].right;
      const auto& clean = h == 0 ? r.ground_truth.frames[t].left : r.ground_truth.frames[t].right;
      for (size_t k = 0; k < noisy.size(); ++k) {
        const Eigen::Vector2d d = noisy[k].uv - clean[k].uv;
        sum_sq += d.squaredNorm();
        n += 2;
      }
    }
  }
  REQUIRE(n >= 10000);
  const double std = std::sqrt(sum_sq / n);
  CHECK(std > 0.9);
  CHECK(std < 1.1);
}

TEST_CASE("keyframe count equals script sub-goal count and flags decode") {
  const TaskScript script = sync_script();
  const SynthResult r = synth_demo(script, NoiseSpec{}, 1);
  const auto kfs = r.ground_truth.keyframe_indices();
  REQUIRE(static_cast<int>(kfs.size()) == script.subgoal_count());
  CHECK(segment_phase_from_flag(r.ground_truth.frames[kfs[0]].keyframe_flag) ==
        SegmentPhase::GraspLift);
  for (size_t i = 1; i < kfs.size(); ++i)
    CHECK(segment_phase_from_flag(r.ground_truth.frames[kfs[i]].keyframe_flag) ==
          SegmentPhase::Goal);
}

TEST_CASE("ground-truth object poses at keyframes equal declared sub-goal poses") {
  const TaskGeometry geom;
  const TaskScript script = make_task_script(TaskKind::SyncAssembly, geom, scene_camera());
  const SynthResult r = synth_demo(script, NoiseSpec{}, 5);
  for (const auto& kf : script.keyframes) {
    // Every keyframe sits on an object waypoint; the synthesized pose there
    // must be that waypoint exactly.
    const ObjectWaypoint* wp = nullptr;
    for (const auto& w : script.object)
      if (w.frame == kf.frame) wp = &w;
    REQUIRE(wp != nullptr);
    const Pose& got = r.ground_truth.frames[kf.frame].obj;
    CHECK((got.translation - wp->pose.translation).norm() == 0.0);
    CHECK(rotation_geodesic(got.rotation, wp->pose.rotation) < 1e-15);
  }
  // Final sub-goal is the inserted pose.
  const Pose& final_pose = r.ground_truth.frames[script.keyframes.back().frame].obj;
  CHECK((final_pose.translation - geom.inserted_center()).norm() < 1e-12);
}

TEST_CASE("object bias is constant across frames") {
  NoiseSpec noise;
  noise.obj_bias = 0.02;
  const SynthResult r = synth_demo(sync_script(), noise, 11);
  Eigen::Vector3d first =
      r.demo.frames[0].obj.translation - r.ground_truth.frames[0].obj.translation;
  CHECK(first.norm() == doctest::Approx(0.02).epsilon(1e-9));
  for (size_t t = 1; t < r.demo.frames.size(); ++t) {
    const Eigen::Vector3d d =
        r.demo.frames[t].obj.translation - r.ground_truth.frames[t].obj.translation;
    CHECK((d - first).norm() < 1e-12);
  }
}

TEST_CASE("dropout zeroes confidence at the declared rate") {
  NoiseSpec noise;
  noise.dropout_prob = 0.2;
  const SynthResult r = synth_demo(sync_script(), noise, 13);
  long dropped = 0, total = 0;
  for (const auto& f : r.demo.frames)
    for (const auto* det : {&f.left, &f.right})
      for (const auto& k : *det) {
        ++total;
        if (k.conf == 0.0) ++dropped;
      }
  const double rate = static_cast<double>(dropped) / total;
  CHECK(rate > 0.17);
  CHECK(rate < 0.23);
}

TEST_CASE("demo file round trip is byte identical") {
  NoiseSpec noise;
  noise.det2d_sigma = 0.7;
  noise.obj_trans_sigma = 0.001;
  noise.obj_rot_sigma = 0.01;
  const SynthResult r = synth_demo(sync_script(), noise, 21);
  const std::string s1 = demo_to_string(r.demo);
  const DemoFile parsed = demo_from_string(s1);
  const std::string s2 = demo_to_string(parsed);
  CHECK(s1 == s2);
}

TEST_CASE("noise spec validation") {
  NoiseSpec bad;
  bad.det2d_sigma = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  NoiseSpec bad2;
  bad2.dropout_prob = 1.5;
  CHECK_THROWS_AS(bad2.validate(), ConfigError);
}
