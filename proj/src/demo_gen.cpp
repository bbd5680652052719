#include "demobot/demo_gen.hpp"

#include <algorithm>
#include <cmath>

#include "demobot/rng.hpp"

namespace demobot {

const char* task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::SyncAssembly:
      return "sync_assembly";
    case TaskKind::AsyncAssembly:
      return "async_assembly";
    case TaskKind::SingleArmMultiStep:
      return "single_arm_multi_step";
  }
  return "sync_assembly";
}

TaskKind task_kind_from_name(const std::string& name) {
  if (name == "sync_assembly") return TaskKind::SyncAssembly;
  if (name == "async_assembly") return TaskKind::AsyncAssembly;
  if (name == "single_arm_multi_step") return TaskKind::SingleArmMultiStep;
  throw ConfigError("unknown task kind '" + name + "'");
}

double min_jerk_blend(double tau) {
  tau = std::clamp(tau, 0.0, 1.0);
  return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
}

Pose interpolate_pose(const Pose& a, const Pose& b, double s) {
  if (s <= 0.0) return a;
  if (s >= 1.0) return b;
  Pose out;
  out.translation = (1.0 - s) * a.translation + s * b.translation;
  out.rotation = a.rotation.slerp(s, b.rotation);
  return out;
}

namespace {

template <typename Waypoint>
Pose track_pose_at(const std::vector<Waypoint>& wps, int frame) {
  if (wps.empty()) throw ContractViolation("empty waypoint track");
  if (frame <= wps.front().frame) return wps.front().pose_of();
  if (frame >= wps.back().frame) return wps.back().pose_of();
  for (size_t i = 1; i < wps.size(); ++i) {
    if (frame <= wps[i].frame) {
      if (frame == wps[i].frame) return wps[i].pose_of();
      const double tau = static_cast<double>(frame - wps[i - 1].frame) /
                         static_cast<double>(wps[i].frame - wps[i - 1].frame);
      return interpolate_pose(wps[i - 1].pose_of(), wps[i].pose_of(), min_jerk_blend(tau));
    }
  }
  return wps.back().pose_of();
}

struct PoseOfObject {
  int frame;
  Pose pose;
  const Pose& pose_of() const { return pose; }
};

double aperture_at(const std::vector<ApertureKey>& keys, int frame) {
  if (keys.empty()) return 0.0;
  if (frame <= keys.front().frame) return keys.front().value;
  if (frame >= keys.back().frame) return keys.back().value;
  for (size_t i = 1; i < keys.size(); ++i) {
    if (frame <= keys[i].frame) {
      if (frame == keys[i].frame) return keys[i].value;
      const double tau = static_cast<double>(frame - keys[i - 1].frame) /
                         static_cast<double>(keys[i].frame - keys[i - 1].frame);
      return keys[i - 1].value +
             min_jerk_blend(tau) * (keys[i].value - keys[i - 1].value);
    }
  }
  return keys.back().value;
}

}  // namespace

void TaskScript::validate() const {
  if (frames < 2) throw ConfigError("task script: needs at least 2 frames");
  if (hands.size() != 2) throw ConfigError("task script: expects left and right hand scripts");
  if (object.empty()) throw ConfigError("task script: empty object schedule");
  const int expected = kind == TaskKind::SyncAssembly       ? 5
                       : kind == TaskKind::AsyncAssembly    ? 11
                                                            : -1;
  if (expected > 0 && subgoal_count() != expected)
    throw ConfigError(std::string("task script: ") + task_kind_name(kind) + " must have " +
                      std::to_string(expected) + " sub-goals, has " +
                      std::to_string(subgoal_count()));
  for (size_t i = 1; i < keyframes.size(); ++i)
    if (keyframes[i].frame <= keyframes[i - 1].frame)
      throw ConfigError("task script: keyframes must be strictly increasing");
  if (!keyframes.empty() &&
      (keyframes.front().frame < 0 || keyframes.back().frame > frames - 1))
    throw ConfigError("task script: keyframe outside trajectory");
}

void NoiseSpec::validate() const {
  if (det2d_sigma < 0 || obj_trans_sigma < 0 || obj_rot_sigma < 0 || obj_bias < 0 ||
      dropout_prob < 0 || dropout_prob > 1)
    throw ConfigError("noise spec: values must be >= 0 (dropout in [0,1])");
}

bool NoiseSpec::is_zero() const {
  return det2d_sigma == 0 && obj_trans_sigma == 0 && obj_rot_sigma == 0 && obj_bias == 0 &&
         dropout_prob == 0;
}

namespace {

// Grasp orientations: palm (-z of the hand frame) facing the peg cap,
// fingers pointing down so the curl pinches the cap.
Eigen::Quaterniond grasp_rotation_right() {
  Eigen::Matrix3d R;
  R.col(0) = -Eigen::Vector3d::UnitY();  // hand x
  R.col(1) = -Eigen::Vector3d::UnitZ();  // hand y (fingers)
  R.col(2) = Eigen::Vector3d::UnitX();   // hand z (palm normal is -z)
  return Eigen::Quaterniond(R);
}

Eigen::Quaterniond grasp_rotation_left() {
  Eigen::Matrix3d R;
  R.col(0) = Eigen::Vector3d::UnitY();
  R.col(1) = -Eigen::Vector3d::UnitZ();
  R.col(2) = -Eigen::Vector3d::UnitX();
  return Eigen::Quaterniond(R);
}

// Wrist pose that puts the closed-hand fingertip centroid at `target`.
Pose wrist_for_grasp(const HandModel& model, const Eigen::Quaterniond& R_wrist,
                     const Eigen::Vector3d& target, double closed_aperture) {
  HandParams p = HandParams::neutral();
  p.theta = model.theta_from_aperture(closed_aperture);
  const auto pts = model.keypoints_local(p);
  // Mapped fingertips: thumb/index/middle/ring tips (keypoints 4, 8, 12, 16).
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int k : {4, 8, 12, 16}) centroid += pts[k];
  centroid /= 4.0;
  Pose w;
  w.rotation = R_wrist;
  w.translation = target - R_wrist * centroid;
  return w;
}

struct ScriptBuilder {
  TaskGeometry geom;
  HandModel model;
  TaskScript script;

  int f(double t) const { return static_cast<int>(std::lround(t * geom.fps)); }

  void add_object(double t, const Pose& p) { script.object.push_back({f(t), p}); }
  void add_kf(double t, SegmentPhase ph, bool sw = false) {
    script.keyframes.push_back({f(t), ph, sw});
  }
  void add_contact(double t0, double t1) { script.contact_windows.push_back({f(t0), f(t1)}); }
  void hand_wp(int h, double t, const Pose& p) { script.hands[h].waypoints.push_back({f(t), p}); }
  void carry(int h, double t0, double t1) { script.hands[h].carries.push_back({f(t0), f(t1)}); }
  void aperture(int h, double t, double v) { script.hands[h].aperture.push_back({f(t), v}); }

  Pose object_pose_at(int frame) const {
    std::vector<PoseOfObject> wps;
    wps.reserve(script.object.size());
    for (const auto& w : script.object) wps.push_back({w.frame, w.pose});
    return track_pose_at(wps, frame);
  }

  // Wrist waypoint that meets the object at time t with the latched grasp.
  Pose grasp_wrist_at(double t, const Eigen::Quaterniond& R, const Eigen::Vector3d& cap_body) {
    const Pose obj = object_pose_at(f(t));
    return wrist_for_grasp(model, R, obj.apply(cap_body), geom.closed_aperture);
  }
};

Pose lying_pose(const TaskGeometry&, const Eigen::Vector3d& pos) {
  return Pose(Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitY())), pos);
}

TaskScript build_sync(const TaskGeometry& g, const Camera& cam, double hand_scale) {
  ScriptBuilder b{g, HandModel::make_default(hand_scale), {}};
  b.script.kind = TaskKind::SyncAssembly;
  b.script.fps = g.fps;
  b.script.camera = cam;
  b.script.hand_scale = hand_scale;
  b.script.hands.resize(2);

  const Pose start = lying_pose(g, g.peg_start_pos);
  const Pose lifted = lying_pose(g, g.peg_start_pos + Eigen::Vector3d(0, 0, 0.08));
  const Eigen::Vector3d ins = g.inserted_center();
  const Pose above(Eigen::Quaterniond::Identity(), ins + Eigen::Vector3d(0, 0, 0.12));
  const Pose align(Eigen::Quaterniond::Identity(),
                   g.hole_entry() + Eigen::Vector3d(0, 0, g.peg_half_len + 0.005));
  const Pose half_in(Eigen::Quaterniond::Identity(),
                     g.hole_entry() + Eigen::Vector3d(0, 0, g.peg_half_len - 0.02));
  const Pose seated(Eigen::Quaterniond::Identity(), ins);

  b.add_object(0.0, start);
  b.add_object(2.4, start);
  b.add_object(3.0, lifted);
  b.add_object(5.0, above);
  b.add_object(6.5, align);
  b.add_object(7.5, half_in);
  b.add_object(9.0, seated);

  b.add_kf(3.0, SegmentPhase::GraspLift);
  b.add_kf(5.0, SegmentPhase::Goal);
  b.add_kf(6.5, SegmentPhase::Goal);
  b.add_kf(7.5, SegmentPhase::Goal);
  b.add_kf(9.0, SegmentPhase::Goal);
  b.add_contact(6.3, 6.7);

  const Eigen::Vector3d cap_r(0, 0, g.peg_half_len);   // +z cap in peg frame
  const Eigen::Vector3d cap_l(0, 0, -g.peg_half_len);  // -z cap
  const Pose grasp_r = b.grasp_wrist_at(2.4, grasp_rotation_right(), cap_r);
  const Pose grasp_l = b.grasp_wrist_at(2.4, grasp_rotation_left(), cap_l);

  // Right hand: park -> pre-grasp -> grasp, then carried.
  b.hand_wp(1, 0.0, Pose(grasp_r.rotation, grasp_r.translation +
                                               Eigen::Vector3d(0.06, -0.04, 0.10)));
  b.hand_wp(1, 1.6, Pose(grasp_r.rotation, grasp_r.translation + Eigen::Vector3d(0.04, 0, 0.02)));
  b.hand_wp(1, 2.4, grasp_r);
  b.carry(1, 2.4, 9.0);
  b.aperture(1, 0.0, g.open_aperture);
  b.aperture(1, 1.6, g.open_aperture);
  b.aperture(1, 2.3, g.closed_aperture);

  b.hand_wp(0, 0.0, Pose(grasp_l.rotation, grasp_l.translation +
                                               Eigen::Vector3d(-0.06, -0.04, 0.10)));
  b.hand_wp(0, 1.6, Pose(grasp_l.rotation, grasp_l.translation + Eigen::Vector3d(-0.04, 0, 0.02)));
  b.hand_wp(0, 2.4, grasp_l);
  b.carry(0, 2.4, 9.0);
  b.aperture(0, 0.0, g.open_aperture);
  b.aperture(0, 1.6, g.open_aperture);
  b.aperture(0, 2.3, g.closed_aperture);

  b.script.frames = b.f(9.0) + 1;
  b.script.validate();
  return b.script;
}

TaskScript build_async(const TaskGeometry& g, const Camera& cam, double hand_scale) {
  ScriptBuilder b{g, HandModel::make_default(hand_scale), {}};
  b.script.kind = TaskKind::AsyncAssembly;
  b.script.fps = g.fps;
  b.script.camera = cam;
  b.script.hand_scale = hand_scale;
  b.script.hands.resize(2);

  const Eigen::Vector3d start_pos(-0.20, 0.05, g.peg_start_pos.z());
  const Eigen::Vector3d handover(0.0, -0.02, g.peg_start_pos.z());
  const Pose p_start = lying_pose(g, start_pos);
  const Pose p_lift1 = lying_pose(g, start_pos + Eigen::Vector3d(0, 0, 0.10));
  const Pose p_carry_a = lying_pose(g, Eigen::Vector3d(-0.10, 0.0, 0.12));
  const Pose p_carry_b = lying_pose(g, handover + Eigen::Vector3d(0, 0, 0.10));
  const Pose p_place = lying_pose(g, handover);
  const Pose p_lift2 = lying_pose(g, handover + Eigen::Vector3d(0, 0, 0.10));
  const Eigen::Vector3d ins = g.inserted_center();
  const Pose p_above(Eigen::Quaterniond::Identity(), ins + Eigen::Vector3d(0, 0, 0.12));
  const Pose p_align(Eigen::Quaterniond::Identity(),
                     g.hole_entry() + Eigen::Vector3d(0, 0, g.peg_half_len + 0.005));
  const Pose p_in1(Eigen::Quaterniond::Identity(),
                   g.hole_entry() + Eigen::Vector3d(0, 0, g.peg_half_len - 0.02));
  const Pose p_in2(Eigen::Quaterniond::Identity(), ins + Eigen::Vector3d(0, 0, 0.005));
  const Pose p_seat(Eigen::Quaterniond::Identity(), ins);

  b.add_object(0.0, p_start);
  b.add_object(2.2, p_start);
  b.add_object(2.8, p_lift1);
  b.add_object(3.6, p_carry_a);
  b.add_object(4.4, p_carry_b);
  b.add_object(5.4, p_place);
  b.add_object(7.4, p_place);  // static through the switch
  b.add_object(8.0, p_lift2);
  b.add_object(9.4, p_above);
  b.add_object(10.6, p_align);
  b.add_object(11.6, p_in1);
  b.add_object(12.6, p_in2);
  b.add_object(13.5, p_seat);

  b.add_kf(2.8, SegmentPhase::GraspLift);
  b.add_kf(3.6, SegmentPhase::Goal);
  b.add_kf(4.4, SegmentPhase::Goal);
  b.add_kf(5.4, SegmentPhase::Goal);
  b.add_kf(6.6, SegmentPhase::Reach, /*is_switch=*/true);
  b.add_kf(8.0, SegmentPhase::GraspLift);
  b.add_kf(9.4, SegmentPhase::Goal);
  b.add_kf(10.6, SegmentPhase::Goal);
  b.add_kf(11.6, SegmentPhase::Goal);
  b.add_kf(12.6, SegmentPhase::Goal);
  b.add_kf(13.5, SegmentPhase::Goal);
  b.add_contact(10.4, 10.8);

  const Eigen::Vector3d cap_r(0, 0, g.peg_half_len);
  const Eigen::Vector3d cap_l(0, 0, -g.peg_half_len);

  // Left hand: grasp, carry, place, release, retreat.
  const Pose grasp_l = b.grasp_wrist_at(2.2, grasp_rotation_left(), cap_l);
  b.hand_wp(0, 0.0, Pose(grasp_l.rotation, grasp_l.translation +
                                               Eigen::Vector3d(-0.05, -0.05, 0.10)));
  b.hand_wp(0, 1.5, Pose(grasp_l.rotation, grasp_l.translation + Eigen::Vector3d(-0.04, 0, 0.02)));
  b.hand_wp(0, 2.2, grasp_l);
  b.carry(0, 2.2, 5.8);
  const Pose release_l = b.grasp_wrist_at(5.8, grasp_rotation_left(), cap_l);
  b.hand_wp(0, 5.8, release_l);
  b.hand_wp(0, 6.6, Pose(release_l.rotation,
                         release_l.translation + Eigen::Vector3d(-0.10, -0.05, 0.08)));
  b.hand_wp(0, 13.5, Pose(release_l.rotation,
                          release_l.translation + Eigen::Vector3d(-0.10, -0.05, 0.08)));
  b.aperture(0, 0.0, g.open_aperture);
  b.aperture(0, 1.5, g.open_aperture);
  b.aperture(0, 2.1, g.closed_aperture);
  b.aperture(0, 5.5, g.closed_aperture);
  b.aperture(0, 6.0, g.open_aperture);

  // Right hand: parked until the switch, then grasp at the handover point.
  const Pose grasp_r = b.grasp_wrist_at(7.4, grasp_rotation_right(), cap_r);
  b.hand_wp(1, 0.0, Pose(grasp_r.rotation, grasp_r.translation +
                                               Eigen::Vector3d(0.08, -0.06, 0.10)));
  b.hand_wp(1, 5.8, Pose(grasp_r.rotation, grasp_r.translation +
                                               Eigen::Vector3d(0.08, -0.06, 0.10)));
  b.hand_wp(1, 6.8, Pose(grasp_r.rotation, grasp_r.translation + Eigen::Vector3d(0.05, 0, 0.02)));
  b.hand_wp(1, 7.4, grasp_r);
  b.carry(1, 7.4, 13.5);
  b.aperture(1, 0.0, g.open_aperture);
  b.aperture(1, 6.8, g.open_aperture);
  b.aperture(1, 7.3, g.closed_aperture);

  b.script.frames = b.f(13.5) + 1;
  b.script.validate();
  return b.script;
}

TaskScript build_single_arm(const TaskGeometry& g, const Camera& cam, double hand_scale) {
  ScriptBuilder b{g, HandModel::make_default(hand_scale), {}};
  b.script.kind = TaskKind::SingleArmMultiStep;
  b.script.fps = g.fps;
  b.script.camera = cam;
  b.script.hand_scale = hand_scale;
  b.script.hands.resize(2);

  const Eigen::Vector3d start_pos(0.08, 0.04, g.peg_start_pos.z());
  const Eigen::Vector3d stage_pos(-0.04, -0.02, g.peg_start_pos.z());
  const Pose p_start = lying_pose(g, start_pos);
  const Pose p_lift1 = lying_pose(g, start_pos + Eigen::Vector3d(0, 0, 0.10));
  const Pose p_place = lying_pose(g, stage_pos);
  const Pose p_lift2 = lying_pose(g, stage_pos + Eigen::Vector3d(0, 0, 0.10));
  const Eigen::Vector3d ins = g.inserted_center();
  const Pose p_above(Eigen::Quaterniond::Identity(), ins + Eigen::Vector3d(0, 0, 0.12));
  const Pose p_align(Eigen::Quaterniond::Identity(),
                     g.hole_entry() + Eigen::Vector3d(0, 0, g.peg_half_len + 0.005));
  const Pose p_seat(Eigen::Quaterniond::Identity(), ins);

  b.add_object(0.0, p_start);
  b.add_object(1.8, p_start);
  b.add_object(2.4, p_lift1);
  b.add_object(3.6, lying_pose(g, stage_pos + Eigen::Vector3d(0, 0, 0.10)));
  b.add_object(4.4, p_place);
  b.add_object(5.8, p_place);  // released, regrasp
  b.add_object(6.4, p_lift2);
  b.add_object(7.8, p_above);
  b.add_object(9.0, p_align);
  b.add_object(10.2, p_seat);

  b.add_kf(2.4, SegmentPhase::GraspLift);
  b.add_kf(4.4, SegmentPhase::Goal);
  b.add_kf(5.2, SegmentPhase::Reach);
  b.add_kf(6.4, SegmentPhase::GraspLift);
  b.add_kf(7.8, SegmentPhase::Goal);
  b.add_kf(9.0, SegmentPhase::Goal);
  b.add_kf(10.2, SegmentPhase::Goal);
  b.add_contact(8.8, 9.2);

  const Eigen::Vector3d cap_r(0, 0, g.peg_half_len);
  const Pose grasp1 = b.grasp_wrist_at(1.8, grasp_rotation_right(), cap_r);
  b.hand_wp(1, 0.0, Pose(grasp1.rotation, grasp1.translation +
                                              Eigen::Vector3d(0.06, -0.05, 0.10)));
  b.hand_wp(1, 1.2, Pose(grasp1.rotation, grasp1.translation + Eigen::Vector3d(0.05, 0, 0.02)));
  b.hand_wp(1, 1.8, grasp1);
  b.carry(1, 1.8, 4.8);
  const Pose regrasp = b.grasp_wrist_at(5.8, grasp_rotation_right(), cap_r);
  b.hand_wp(1, 4.8, regrasp);
  b.hand_wp(1, 5.2, Pose(regrasp.rotation, regrasp.translation + Eigen::Vector3d(0.06, 0, 0.05)));
  b.hand_wp(1, 5.8, regrasp);
  b.carry(1, 5.8, 10.2);
  b.aperture(1, 0.0, g.open_aperture);
  b.aperture(1, 1.2, g.open_aperture);
  b.aperture(1, 1.75, g.closed_aperture);
  b.aperture(1, 4.6, g.closed_aperture);
  b.aperture(1, 5.1, g.open_aperture);
  b.aperture(1, 5.4, g.open_aperture);
  b.aperture(1, 5.85, g.closed_aperture);

  // Left hand parked far to the side.
  const Pose park_l(grasp_rotation_left(), Eigen::Vector3d(-0.28, -0.08, 0.16));
  b.hand_wp(0, 0.0, park_l);
  b.hand_wp(0, 10.2, park_l);
  b.aperture(0, 0.0, g.open_aperture);

  b.script.frames = b.f(10.2) + 1;
  b.script.validate();
  return b.script;
}

}  // namespace

TaskScript make_task_script(TaskKind kind, const TaskGeometry& geom, const Camera& camera,
                            double hand_scale) {
  switch (kind) {
    case TaskKind::SyncAssembly:
      return build_sync(geom, camera, hand_scale);
    case TaskKind::AsyncAssembly:
      return build_async(geom, camera, hand_scale);
    case TaskKind::SingleArmMultiStep:
      return build_single_arm(geom, camera, hand_scale);
  }
  throw ConfigError("bad task kind");
}

SynthResult synth_demo(const TaskScript& script, const NoiseSpec& noise, std::uint64_t seed) {
  script.validate();
  noise.validate();
  const HandModel model = HandModel::make_default(script.hand_scale);
  const int T = script.frames - 1;

  // Dense object track.
  std::vector<PoseOfObject> obj_wps;
  for (const auto& w : script.object) obj_wps.push_back({w.frame, w.pose});
  std::vector<Pose> obj(T + 1);
  for (int t = 0; t <= T; ++t) obj[t] = track_pose_at(obj_wps, t);

  // Dense per-hand wrist poses and apertures; carried spans latch the
  // object-relative offset at their first frame.
  SynthResult out;
  out.hand_truth.resize(2);
  std::vector<std::vector<Pose>> wrist(2, std::vector<Pose>(T + 1));
  std::vector<std::vector<double>> aperture(2, std::vector<double>(T + 1));
  for (int h = 0; h < 2; ++h) {
    const HandScript& hs = script.hands[h];
    struct PoseOfHand {
      int frame;
      Pose pose;
      const Pose& pose_of() const { return pose; }
    };
    std::vector<PoseOfHand> free_wps;
    for (const auto& w : hs.waypoints) free_wps.push_back({w.frame, w.wrist});
    std::sort(free_wps.begin(), free_wps.end(),
              [](const PoseOfHand& a, const PoseOfHand& b) { return a.frame < b.frame; });
    std::vector<ApertureKey> ap_keys = hs.aperture;
    std::sort(ap_keys.begin(), ap_keys.end(),
              [](const ApertureKey& a, const ApertureKey& b) { return a.frame < b.frame; });
    for (int t = 0; t <= T; ++t) {
      aperture[h][t] = aperture_at(ap_keys, t);
      const CarrySpan* span = nullptr;
      for (const auto& c : hs.carries)
        if (t >= c.frame_start && t <= c.frame_end) {
          span = &c;
          break;
        }
      if (span) {
        // Offset latched at span start from the free trajectory.
        std::vector<PoseOfHand> all = free_wps;
        const Pose wrist_at_start = track_pose_at(all, span->frame_start);
        const Pose offset = obj[span->frame_start].inverse() * wrist_at_start;
        wrist[h][t] = obj[t] * offset;
      } else {
        wrist[h][t] = track_pose_at(free_wps, t);
      }
    }
  }

  Rng rng(seed);
  Eigen::Vector3d bias = Eigen::Vector3d::Zero();
  if (noise.obj_bias > 0) {
    Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
    while (dir.norm() < 1e-6) dir = {rng.normal(), rng.normal(), rng.normal()};
    bias = noise.obj_bias * dir.normalized();
  }

  DemoFile truth;
  truth.keypoint_count = model.keypoint_count();
  truth.fps = script.fps;
  DemoFile demo = truth;

  for (int t = 0; t <= T; ++t) {
    DemoFrame tf;
    tf.t = static_cast<double>(t) / script.fps;
    tf.obj = obj[t];
    for (const auto& kf : script.keyframes)
      if (kf.frame == t) tf.keyframe_flag = keyframe_flag_from(kf.phase, kf.is_switch);
    for (const auto& [c0, c1] : script.contact_windows)
      if (t >= c0 && t <= c1) tf.contact = true;

    DemoFrame nf = tf;
    for (int h = 0; h < 2; ++h) {
      HandParams p = HandParams::neutral();
      p.theta = model.theta_from_aperture(aperture[h][t]);
      p.global = wrist[h][t];
      out.hand_truth[h].push_back(p);
      std::vector<Eigen::Vector2d> uv;
      try {
        uv = model.keypoints_2d(p, script.camera);
      } catch (const ProjectionError& e) {
        throw ConfigError(std::string("hand ") + (h == 0 ? "left" : "right") + " frame " +
                          std::to_string(t) + " is not visible from the camera: " + e.what());
      }
      FrameDetections clean(uv.size());
      for (size_t k = 0; k < uv.size(); ++k) clean[k] = {uv[k], 1.0};
      FrameDetections noisy = clean;
      if (noise.det2d_sigma > 0)
        for (auto& d : noisy)
          d.uv += noise.det2d_sigma * Eigen::Vector2d(rng.normal(), rng.normal());
      if (noise.dropout_prob > 0)
        for (auto& d : noisy)
          if (rng.uniform() < noise.dropout_prob) {
            d.uv.setZero();
            d.conf = 0.0;
          }
      (h == 0 ? tf.left : tf.right) = clean;
      (h == 0 ? nf.left : nf.right) = noisy;
    }

    if (noise.obj_bias > 0) nf.obj.translation += bias;
    if (noise.obj_trans_sigma > 0)
      nf.obj.translation +=
          noise.obj_trans_sigma * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
    if (noise.obj_rot_sigma > 0) {
      const Eigen::Vector3d rv =
          noise.obj_rot_sigma * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      nf.obj.rotation = (quat_exp(rv) * nf.obj.rotation).normalized();
    }

    truth.frames.push_back(std::move(tf));
    demo.frames.push_back(std::move(nf));
  }

  out.demo = std::move(demo);
  out.ground_truth = std::move(truth);
  return out;
}

}  // namespace demobot
