#include "demobot/segments.hpp"

#include <algorithm>

#include "demobot/format_io.hpp"

namespace demobot {

const char* segment_phase_name(SegmentPhase p) {
  switch (p) {
    case SegmentPhase::Reach:
      return "reach";
    case SegmentPhase::GraspLift:
      return "grasp_lift";
    case SegmentPhase::Goal:
      return "goal";
  }
  return "goal";
}

SegmentPhase segment_phase_from_name(const std::string& name) {
  if (name == "reach") return SegmentPhase::Reach;
  if (name == "grasp_lift") return SegmentPhase::GraspLift;
  if (name == "goal") return SegmentPhase::Goal;
  throw ConfigError("unknown segment phase '" + name + "'");
}

SegmentPhase segment_phase_from_flag(int keyframe_flag) {
  switch (keyframe_flag % 10) {
    case 1:
      return SegmentPhase::Reach;
    case 2:
      return SegmentPhase::GraspLift;
    case 3:
      return SegmentPhase::Goal;
    default:
      throw ConfigError("keyframe flag " + std::to_string(keyframe_flag) +
                        " has no phase code");
  }
}

bool segment_switch_from_flag(int keyframe_flag) { return keyframe_flag / 10 == 1; }

int keyframe_flag_from(SegmentPhase p, bool is_switch) {
  int code = 0;
  switch (p) {
    case SegmentPhase::Reach:
      code = 1;
      break;
    case SegmentPhase::GraspLift:
      code = 2;
      break;
    case SegmentPhase::Goal:
      code = 3;
      break;
  }
  return code + (is_switch ? 10 : 0);
}

int full_body_dim(const std::vector<HandMotion>& hands) {
  int dim = 0;
  for (const HandMotion& h : hands) {
    if (h.arm == nullptr || h.hand == nullptr)
      throw ContractViolation("full_body_dim: incomplete hand motion");
    dim += h.arm->movable_count() + h.hand->movable_count();
  }
  return dim;
}

BuildSegmentsResult build_segments(const std::vector<HandMotion>& hands,
                                   const ObjectTrack& obj_track,
                                   std::vector<KeyframeInfo> keyframes,
                                   const IkParams& ik_params, double fail_residual) {
  if (hands.empty()) throw ContractViolation("build_segments: no hands");
  obj_track.validate();
  const int T = obj_track.frame_count() - 1;
  if (T < 0) throw ContractViolation("build_segments: empty object track");
  for (const HandMotion& h : hands) {
    if (h.arm == nullptr || h.hand == nullptr)
      throw ContractViolation("build_segments: hand motion without chains");
    if (static_cast<int>(h.p_base.size()) != T + 1 ||
        static_cast<int>(h.q_hand.size()) != T + 1)
      throw ContractViolation("build_segments: per-hand track length mismatch");
    for (const JointConfig& q : h.q_hand) h.hand->check_config(q);
  }

  BuildSegmentsResult out;
  SegmentBuildReport& report = out.report;
  report.frames = T + 1;

  std::sort(keyframes.begin(), keyframes.end(),
            [](const KeyframeInfo& a, const KeyframeInfo& b) { return a.frame < b.frame; });
  for (const KeyframeInfo& k : keyframes)
    if (k.frame < 0 || k.frame > T)
      throw ContractViolation("keyframe " + std::to_string(k.frame) + " outside [0, " +
                              std::to_string(T) + "]");
  for (size_t i = 1; i < keyframes.size(); ++i)
    if (keyframes[i].frame == keyframes[i - 1].frame)
      throw ContractViolation("duplicate keyframe " + std::to_string(keyframes[i].frame));
  if (keyframes.empty() || keyframes.back().frame != T) {
    report.warnings.push_back("final frame " + std::to_string(T) +
                              " was not a keyframe; appended as a goal keyframe");
    keyframes.push_back({T, SegmentPhase::Goal, false});
  }

  // Per-hand IK state, warm-started across frames.
  struct HandState {
    JointConfig q_arm;
    std::vector<int> arm_movable;
    std::vector<int> hand_movable;
  };
  std::vector<HandState> hs(hands.size());
  int full_dim = 0;
  for (size_t h = 0; h < hands.size(); ++h) {
    const KinematicChain& arm = *hands[h].arm;
    hs[h].q_arm = hands[h].q_arm_init.size() == arm.joint_count()
                      ? arm.clamp(hands[h].q_arm_init)
                      : JointConfig::zeros(arm.joint_count(), arm.name());
    hs[h].arm_movable = arm.movable_joints();
    hs[h].hand_movable = hands[h].hand->movable_joints();
    full_dim += static_cast<int>(hs[h].arm_movable.size());
    full_dim += static_cast<int>(hs[h].hand_movable.size());
  }

  std::vector<Eigen::VectorXd> buffer;
  size_t next_keyframe = 0;
  for (int t = 0; t <= T; ++t) {
    Eigen::VectorXd q_full(full_dim);
    int offset = 0;
    for (size_t h = 0; h < hands.size(); ++h) {
      const KinematicChain& arm = *hands[h].arm;
      // Arm IK toward the hand base pose, expressed in the arm root frame.
      const Pose target_local = hands[h].arm_base.inverse() * hands[h].p_base[t];
      const IkResult ik = arm.solve_ik(target_local, hs[h].q_arm, ik_params);
      hs[h].q_arm = ik.q;
      report.max_pos_residual = std::max(report.max_pos_residual, ik.pos_error);
      report.max_rot_residual = std::max(report.max_rot_residual, ik.rot_error);
      if (ik.converged) {
        ++report.ik_converged;
      } else {
        report.warnings.push_back("frame " + std::to_string(t) + " hand " +
                                  std::to_string(h) + ": IK residual " +
                                  std::to_string(ik.pos_error) + " m / " +
                                  std::to_string(ik.rot_error) + " rad");
      }
      if (ik.pos_error > fail_residual) report.ok = false;

      for (int j : hs[h].arm_movable) q_full[offset++] = ik.q.values[j];
      const JointConfig& qh = hands[h].q_hand[t];
      for (int j : hs[h].hand_movable) q_full[offset++] = qh.values[j];
    }
    buffer.push_back(std::move(q_full));

    if (next_keyframe < keyframes.size() && keyframes[next_keyframe].frame == t) {
      Segment seg;
      seg.base_actions = std::move(buffer);
      buffer.clear();
      seg.goal = obj_track.poses[t];
      seg.index = static_cast<int>(out.segments.size());
      seg.source_keyframe = t;
      seg.phase = keyframes[next_keyframe].phase;
      seg.is_switch = keyframes[next_keyframe].is_switch;
      out.segments.push_back(std::move(seg));
      ++next_keyframe;
    }
  }
  return out;
}

std::string segments_to_string(const std::vector<Segment>& segments, int joint_dim) {
  std::string out = "demobot_segments v";
  append_number(out, static_cast<long long>(kSegmentsFileVersion));
  out += " segments=";
  append_number(out, static_cast<long long>(segments.size()));
  out += " joint_dim=";
  append_number(out, static_cast<long long>(joint_dim));
  out.push_back('\n');
  for (const Segment& s : segments) {
    out += "SEG ";
    append_number(out, static_cast<long long>(s.index));
    out += " PHASE ";
    out += segment_phase_name(s.phase);
    out += " SWITCH ";
    append_number(out, static_cast<long long>(s.is_switch ? 1 : 0));
    out += " KF ";
    append_number(out, static_cast<long long>(s.source_keyframe));
    out += " FRAMES ";
    append_number(out, static_cast<long long>(s.base_actions.size()));
    out += " GOAL ";
    append_number(out, s.goal.rotation.w());
    out.push_back(' ');
    append_number(out, s.goal.rotation.x());
    out.push_back(' ');
    append_number(out, s.goal.rotation.y());
    out.push_back(' ');
    append_number(out, s.goal.rotation.z());
    out.push_back(' ');
    append_number(out, s.goal.translation.x());
    out.push_back(' ');
    append_number(out, s.goal.translation.y());
    out.push_back(' ');
    append_number(out, s.goal.translation.z());
    out.push_back('\n');
    for (const Eigen::VectorXd& a : s.base_actions) {
      if (a.size() != joint_dim)
        throw ContractViolation("segment base action dim mismatch");
      out += "A";
      for (int i = 0; i < a.size(); ++i) {
        out.push_back(' ');
        append_number(out, a[i]);
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::vector<Segment> segments_from_string(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ConfigError("segments file: empty");
  long long n_segments = -1, joint_dim = -1;
  {
    TokenReader header(lines[0], "segments header");
    header.expect("demobot_segments");
    const std::string_view ver = header.token();
    if (ver != "v1")
      throw ConfigError("segments file: unsupported version '" + std::string(ver) + "'");
    while (!header.done()) {
      const std::string tok(header.token());
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw ConfigError("segments header: bad field '" + tok + "'");
      TokenReader vr(tok.substr(eq + 1), "segments header");
      if (tok.substr(0, eq) == "segments")
        n_segments = vr.integer();
      else if (tok.substr(0, eq) == "joint_dim")
        joint_dim = vr.integer();
      else
        throw ConfigError("segments header: unknown field '" + tok + "'");
    }
  }
  if (n_segments < 0 || joint_dim <= 0) throw ConfigError("segments header: missing fields");

  std::vector<Segment> segments;
  Segment* current = nullptr;
  long long declared_frames = 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    TokenReader r(lines[i], "segments line " + std::to_string(i));
    const std::string_view head = r.token();
    if (head == "SEG") {
      if (current && static_cast<long long>(current->base_actions.size()) != declared_frames)
        throw ConfigError("segment " + std::to_string(current->index) +
                          ": frame count mismatch");
      Segment s;
      s.index = static_cast<int>(r.integer());
      r.expect("PHASE");
      s.phase = segment_phase_from_name(std::string(r.token()));
      r.expect("SWITCH");
      s.is_switch = r.integer() != 0;
      r.expect("KF");
      s.source_keyframe = static_cast<int>(r.integer());
      r.expect("FRAMES");
      declared_frames = r.integer();
      r.expect("GOAL");
      const double qw = r.number(), qx = r.number(), qy = r.number(), qz = r.number();
      s.goal.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
      if (std::abs(s.goal.rotation.norm() - 1.0) > 1e-6)
        throw ConfigError("segments line " + std::to_string(i) + ": non-unit goal quaternion");
      s.goal.translation = {r.number(), r.number(), r.number()};
      segments.push_back(std::move(s));
      current = &segments.back();
    } else if (head == "A") {
      if (!current) throw ConfigError("segments file: action before first SEG");
      Eigen::VectorXd a(joint_dim);
      for (int k = 0; k < joint_dim; ++k) a[k] = r.number();
      if (!r.done())
        throw ConfigError("segments line " + std::to_string(i) + ": trailing data");
      current->base_actions.push_back(std::move(a));
    } else {
      throw ConfigError("segments line " + std::to_string(i) + ": unknown record '" +
                        std::string(head) + "'");
    }
  }
  if (current && static_cast<long long>(current->base_actions.size()) != declared_frames)
    throw ConfigError("segment " + std::to_string(current->index) + ": frame count mismatch");
  if (static_cast<long long>(segments.size()) != n_segments)
    throw ConfigError("segments file: header declares " + std::to_string(n_segments) +
                      " segments, found " + std::to_string(segments.size()));
  return segments;
}

void save_segments(const std::vector<Segment>& segments, int joint_dim,
                   const std::string& path) {
  write_text_file(path, segments_to_string(segments, joint_dim));
}

std::vector<Segment> load_segments(const std::string& path) {
  return segments_from_string(read_text_file(path));
}

}  // namespace demobot
