#include "demobot/demo_io.hpp"

#include "demobot/format_io.hpp"

namespace demobot {

std::vector<int> DemoFile::keyframe_indices() const {
  std::vector<int> out;
  for (int i = 0; i < frame_count(); ++i)
    if (frames[i].keyframe_flag != 0) out.push_back(i);
  return out;
}

ObjectTrack DemoFile::object_track(const std::string& object_id) const {
  ObjectTrack track;
  track.object_id = object_id;
  for (const DemoFrame& f : frames) {
    track.stamps.push_back(f.t);
    track.poses.push_back(f.obj);
  }
  track.validate();
  return track;
}

namespace {

void append_detections(std::string& out, const FrameDetections& det) {
  for (const Keypoint2D& k : det) {
    out.push_back(' ');
    append_number(out, k.uv.x());
    out.push_back(' ');
    append_number(out, k.uv.y());
    out.push_back(' ');
    append_number(out, k.conf);
  }
}

FrameDetections read_detections(TokenReader& r, int count) {
  FrameDetections det(count);
  for (int k = 0; k < count; ++k) {
    det[k].uv.x() = r.number();
    det[k].uv.y() = r.number();
    det[k].conf = r.number();
  }
  return det;
}

}  // namespace

std::string demo_to_string(const DemoFile& demo) {
  std::string out = "demobot_demo v";
  append_number(out, static_cast<long long>(kDemoFileVersion));
  out += " kpts=";
  append_number(out, static_cast<long long>(demo.keypoint_count));
  out += " frames=";
  append_number(out, static_cast<long long>(demo.frames.size()));
  out += " fps=";
  append_number(out, demo.fps);
  out.push_back('\n');
  for (const DemoFrame& f : demo.frames) {
    append_number(out, f.t);
    out += " L";
    append_detections(out, f.left);
    out += " R";
    append_detections(out, f.right);
    out += " OBJ ";
    append_number(out, f.obj.rotation.w());
    out.push_back(' ');
    append_number(out, f.obj.rotation.x());
    out.push_back(' ');
    append_number(out, f.obj.rotation.y());
    out.push_back(' ');
    append_number(out, f.obj.rotation.z());
    out.push_back(' ');
    append_number(out, f.obj.translation.x());
    out.push_back(' ');
    append_number(out, f.obj.translation.y());
    out.push_back(' ');
    append_number(out, f.obj.translation.z());
    out += " KF ";
    append_number(out, static_cast<long long>(f.keyframe_flag));
    out += " CT ";
    append_number(out, static_cast<long long>(f.contact ? 1 : 0));
    out.push_back('\n');
  }
  return out;
}

DemoFile demo_from_string(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ConfigError("demo file: empty");
  {
    TokenReader header(lines[0], "demo header");
    header.expect("demobot_demo");
    const std::string_view ver = header.token();
    if (ver != "v1") throw ConfigError("demo file: unsupported version '" + std::string(ver) + "'");
  }
  DemoFile demo;
  long long declared_frames = -1;
  {
    // Re-parse header fields key=value.
    TokenReader header(lines[0], "demo header");
    header.token();
    header.token();
    while (!header.done()) {
      const std::string tok(header.token());
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError("demo header: bad field '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      TokenReader vr(val, "demo header " + key);
      if (key == "kpts")
        demo.keypoint_count = static_cast<int>(vr.integer());
      else if (key == "frames")
        declared_frames = vr.integer();
      else if (key == "fps")
        demo.fps = vr.number();
      else
        throw ConfigError("demo header: unknown field '" + key + "'");
    }
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    TokenReader r(lines[i], "demo frame line " + std::to_string(i));
    DemoFrame f;
    f.t = r.number();
    r.expect("L");
    f.left = read_detections(r, demo.keypoint_count);
    r.expect("R");
    f.right = read_detections(r, demo.keypoint_count);
    r.expect("OBJ");
    const double qw = r.number(), qx = r.number(), qy = r.number(), qz = r.number();
    // Keep the stored components bit-exact so write -> read -> write is
    // byte-identical; only validate unit norm.
    f.obj.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
    if (std::abs(f.obj.rotation.norm() - 1.0) > 1e-6)
      throw ConfigError("demo frame line " + std::to_string(i) + ": non-unit quaternion");
    f.obj.translation = {r.number(), r.number(), r.number()};
    r.expect("KF");
    f.keyframe_flag = static_cast<int>(r.integer());
    r.expect("CT");
    f.contact = r.integer() != 0;
    if (!r.done()) throw ConfigError("demo frame line " + std::to_string(i) + ": trailing data");
    demo.frames.push_back(std::move(f));
  }
  if (declared_frames >= 0 && declared_frames != static_cast<long long>(demo.frames.size()))
    throw ConfigError("demo file: header declares " + std::to_string(declared_frames) +
                      " frames, found " + std::to_string(demo.frames.size()));
  return demo;
}

void save_demo(const DemoFile& demo, const std::string& path) {
  write_text_file(path, demo_to_string(demo));
}

DemoFile load_demo(const std::string& path) { return demo_from_string(read_text_file(path)); }

}  // namespace demobot
