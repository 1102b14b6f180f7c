// Regenerates the committed files under fixtures/ and prints the hex dump of
// the golden .pose file's first 64 bytes (quoted in FORMAT.md).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "posekit/codec.hpp"
#include "posekit/openpose.hpp"

using nlohmann::json;

namespace {

posekit::Pose golden_pose() {
  posekit::Pose pose;
  pose.header = posekit::openpose_header(137, 640, 480);
  pose.body.fps = 25;
  posekit::MaskedTensor t = posekit::MaskedTensor::zeroed(1, 1, 137, 2);
  for (std::size_t k = 0; k < 137; ++k) {
    t.at(0, 0, k, 0) = static_cast<float>(k);
    t.at(0, 0, k, 1) = static_cast<float>(137 - k);
    t.conf(0, 0, k) = 0.9f;
  }
  // one deliberately masked point
  t.conf(0, 0, 3) = 0.0f;
  t.at(0, 0, 3, 0) = 0.0f;
  t.at(0, 0, 3, 1) = 0.0f;
  pose.body.tensor = std::move(t);
  return pose;
}

json triples(int tag, int person, std::size_t count) {
  json arr = json::array();
  for (std::size_t k = 0; k < count; ++k) {
    arr.push_back(tag * 1000 + static_cast<double>(k) + person * 0.25);
    arr.push_back(tag * 1000 + static_cast<double>(k) + person * 0.25 + 0.5);
    // conf cycles over 0, 0.3, 0.6, 0.9, 1.2 — exercises masking and clamping
    arr.push_back((static_cast<int>(k) % 5) * 0.3);
  }
  return arr;
}

json person_json(int person, bool with_hands) {
  json p;
  p["person_id"] = {-1};
  p["pose_keypoints_2d"] = triples(0, person, 25);
  p["face_keypoints_2d"] = triples(1, person, 70);
  if (with_hands) {
    p["hand_left_keypoints_2d"] = triples(2, person, 21);
    p["hand_right_keypoints_2d"] = triples(3, person, 21);
  }
  return p;
}

json frame_json(int n_people, bool with_hands) {
  json f;
  f["version"] = 1.3;
  f["people"] = json::array();
  for (int p = 0; p < n_people; ++p) f["people"].push_back(person_json(p, with_hands));
  return f;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text << "\n";
}

} // namespace

int main() {
  namespace fs = std::filesystem;
  fs::create_directories("fixtures/openpose_frames");

  const posekit::Pose pose = golden_pose();
  posekit::write_pose_file("fixtures/openpose_137.pose", pose);
  const auto bytes = posekit::write_pose(pose);
  std::printf("fixtures/openpose_137.pose: %zu bytes (header %zu)\n", bytes.size(),
              posekit::header_size(pose.header));
  for (std::size_t i = 0; i < 64 && i < bytes.size(); ++i) {
    std::printf("%02x%s", bytes[i], (i + 1) % 16 == 0 ? "\n" : " ");
  }

  // Three frames with varying people counts; frame 1 has no hand arrays.
  const json frames[3] = {frame_json(3, true), frame_json(1, false), frame_json(0, true)};
  for (int i = 0; i < 3; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "fixtures/openpose_frames/frame_%06d.json", i);
    write_text(name, frames[i].dump());
  }
  json mono = json::array({frames[0], frames[1], frames[2]});
  write_text("fixtures/openpose_monolithic.json", mono.dump());
  std::printf("fixtures/openpose_frames/* and fixtures/openpose_monolithic.json written\n");
  return 0;
}
