#include "posekit/openpose.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "posekit/error.hpp"

namespace posekit {

namespace {

// Embedded OpenPose conventions: point names, limb pairs, render palette.
// These are plumbing constants describing the upstream tool's layout.

Component body_25() {
  Component c;
  c.name = "BODY_25";
  c.format = "XYC";
  c.points = {"Nose",      "Neck",      "RShoulder", "RElbow",    "RWrist",
              "LShoulder", "LElbow",    "LWrist",    "MidHip",    "RHip",
              "RKnee",     "RAnkle",    "LHip",      "LKnee",     "LAnkle",
              "REye",      "LEye",      "REar",      "LEar",      "LBigToe",
              "LSmallToe", "LHeel",     "RBigToe",   "RSmallToe", "RHeel"};
  c.limbs = {{1, 8},   {1, 2},   {1, 5},   {2, 3},   {3, 4},   {5, 6},
             {6, 7},   {8, 9},   {9, 10},  {10, 11}, {8, 12},  {12, 13},
             {13, 14}, {1, 0},   {0, 15},  {15, 17}, {0, 16},  {16, 18},
             {14, 19}, {19, 20}, {14, 21}, {11, 22}, {22, 23}, {11, 24}};
  c.colors = {{255, 0, 85},  {255, 0, 0},   {255, 85, 0},  {255, 170, 0}, {255, 255, 0},
              {170, 255, 0}, {85, 255, 0},  {0, 255, 0},   {255, 0, 0},   {0, 255, 85},
              {0, 255, 170}, {0, 255, 255}, {0, 170, 255}, {0, 85, 255},  {0, 0, 255},
              {255, 0, 170}, {170, 0, 255}, {255, 0, 255}, {85, 0, 255},  {0, 0, 255},
              {0, 0, 255},   {0, 0, 255},   {0, 255, 255}, {0, 255, 255}, {0, 255, 255}};
  return c;
}

Component face_70() {
  Component c;
  c.name = "FACE";
  c.format = "XYC";
  c.points.reserve(70);
  for (int i = 0; i < 70; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "FACE_%02d", i);
    c.points.emplace_back(buf);
  }
  const auto chain = [&c](std::uint16_t first, std::uint16_t last, bool loop) {
    for (std::uint16_t i = first; i < last; ++i) c.limbs.push_back({i, static_cast<std::uint16_t>(i + 1)});
    if (loop) c.limbs.push_back({last, first});
  };
  chain(0, 16, false);   // jaw
  chain(17, 21, false);  // right eyebrow
  chain(22, 26, false);  // left eyebrow
  chain(27, 30, false);  // nose bridge
  chain(31, 35, false);  // lower nose
  chain(36, 41, true);   // right eye
  chain(42, 47, true);   // left eye
  chain(48, 59, true);   // outer lip
  chain(60, 67, true);   // inner lip
  c.colors = {{128, 128, 128}};
  return c;
}

Component hand_21(const std::string& name) {
  Component c;
  c.name = name;
  c.format = "XYC";
  c.points = {"Wrist",   "Thumb1",  "Thumb2",  "Thumb3",  "Thumb4",  "Index1", "Index2",
              "Index3",  "Index4",  "Middle1", "Middle2", "Middle3", "Middle4", "Ring1",
              "Ring2",   "Ring3",   "Ring4",   "Pinky1",  "Pinky2",  "Pinky3",  "Pinky4"};
  for (std::uint16_t finger = 0; finger < 5; ++finger) {
    const std::uint16_t base = static_cast<std::uint16_t>(1 + finger * 4);
    c.limbs.push_back({0, base});
    for (std::uint16_t i = 0; i < 3; ++i) {
      c.limbs.push_back({static_cast<std::uint16_t>(base + i), static_cast<std::uint16_t>(base + i + 1)});
    }
  }
  c.colors.push_back({128, 128, 128});  // wrist
  const Color finger_colors[5] = {
      {255, 0, 0}, {255, 165, 0}, {0, 200, 0}, {0, 128, 255}, {160, 0, 255}};
  for (const Color& col : finger_colors) {
    for (int i = 0; i < 4; ++i) c.colors.push_back(col);
  }
  return c;
}

/// Remove a set of points, dropping limbs that touch them and keeping the
/// color table aligned (only valid when colors map 1:1 to points).
Component drop_points(Component c, const std::set<std::uint16_t>& remove) {
  std::vector<std::uint16_t> remap(c.points.size(), 0xFFFF);
  Component out;
  out.name = c.name;
  out.format = c.format;
  for (std::uint16_t i = 0; i < c.points.size(); ++i) {
    if (remove.count(i)) continue;
    remap[i] = static_cast<std::uint16_t>(out.points.size());
    out.points.push_back(std::move(c.points[i]));
    if (c.colors.size() == remap.size()) out.colors.push_back(c.colors[i]);
  }
  for (const Limb& l : c.limbs) {
    if (remap[l.from] != 0xFFFF && remap[l.to] != 0xFFFF) {
      out.limbs.push_back({remap[l.from], remap[l.to]});
    }
  }
  if (out.colors.empty()) out.colors = c.colors;
  return out;
}

constexpr std::size_t kBodyPoints = 25;
constexpr std::size_t kFacePoints = 70;
constexpr std::size_t kHandPoints = 21;
constexpr std::size_t kTotalPoints = kBodyPoints + kFacePoints + 2 * kHandPoints;

std::vector<float> read_triples(const nlohmann::json& person, const char* key,
                                std::size_t expected_points) {
  if (!person.contains(key)) return {};
  const auto& arr = person[key];
  if (!arr.is_array()) throw FormatError(std::string(key) + " must be an array");
  if (arr.empty()) return {};
  if (arr.size() % 3 != 0) {
    throw FormatError(std::string(key) + " length " + std::to_string(arr.size()) +
                      " is not divisible by 3");
  }
  if (arr.size() != expected_points * 3) {
    throw FormatError(std::string(key) + " carries " + std::to_string(arr.size() / 3) +
                      " triples, expected " + std::to_string(expected_points));
  }
  std::vector<float> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw FormatError(std::string(key) + " must contain only numbers");
    out.push_back(v.get<float>());
  }
  return out;
}

void fill_component(MaskedTensor& t, std::size_t frame, std::size_t person,
                    std::size_t offset, std::size_t count, const std::vector<float>& triples) {
  if (triples.empty()) return;  // missing array: stays fully masked
  for (std::size_t k = 0; k < count; ++k) {
    t.at(frame, person, offset + k, 0) = triples[k * 3];
    t.at(frame, person, offset + k, 1) = triples[k * 3 + 1];
    t.conf(frame, person, offset + k) = triples[k * 3 + 2];
  }
}

} // namespace

Header openpose_header(int variant, std::uint16_t width, std::uint16_t height) {
  if (variant != 135 && variant != 137) {
    throw ValueError("unsupported OpenPose variant " + std::to_string(variant) +
                     " (expected 135 or 137)");
  }
  Header h;
  h.version = 0.1f;
  h.width = width;
  h.height = height;
  h.depth = 0;
  Component body = body_25();
  if (variant == 135) {
    // Drop the two synthesized midpoints (Neck, MidHip); 23 detected points stay.
    body = drop_points(std::move(body), {1, 8});
    body.name = "BODY_23";
  }
  h.components.push_back(std::move(body));
  h.components.push_back(face_70());
  h.components.push_back(hand_21("HAND_LEFT"));
  h.components.push_back(hand_21("HAND_RIGHT"));
  return h;
}

OpenPoseFrame parse_openpose_frame(const nlohmann::json& frame) {
  if (!frame.is_object() || !frame.contains("people") || !frame["people"].is_array()) {
    throw FormatError("OpenPose frame must be an object with a 'people' array");
  }
  OpenPoseFrame out;
  for (const auto& person : frame["people"]) {
    if (!person.is_object()) throw FormatError("OpenPose person must be an object");
    OpenPosePerson p;
    p.pose_keypoints = read_triples(person, "pose_keypoints_2d", kBodyPoints);
    p.face_keypoints = read_triples(person, "face_keypoints_2d", kFacePoints);
    p.hand_left_keypoints = read_triples(person, "hand_left_keypoints_2d", kHandPoints);
    p.hand_right_keypoints = read_triples(person, "hand_right_keypoints_2d", kHandPoints);
    out.people.push_back(std::move(p));
  }
  return out;
}

Pose parse_openpose(const std::vector<OpenPoseFrame>& frames, std::uint16_t fps,
                    std::uint16_t width, std::uint16_t height, std::size_t max_people) {
  if (fps == 0) throw ValueError("fps must be >= 1");
  if (max_people == 0) throw ValueError("max-people must be >= 1");

  MaskedTensor t = MaskedTensor::zeroed(frames.size(), max_people, kTotalPoints, 2);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto& people = frames[f].people;
    const std::size_t n = std::min(people.size(), max_people);  // extras dropped
    for (std::size_t p = 0; p < n; ++p) {
      fill_component(t, f, p, 0, kBodyPoints, people[p].pose_keypoints);
      fill_component(t, f, p, kBodyPoints, kFacePoints, people[p].face_keypoints);
      fill_component(t, f, p, kBodyPoints + kFacePoints, kHandPoints,
                     people[p].hand_left_keypoints);
      fill_component(t, f, p, kBodyPoints + kFacePoints + kHandPoints, kHandPoints,
                     people[p].hand_right_keypoints);
    }
    // fewer detected people than max_people: the remaining slots stay masked
  }
  t.canonicalize();

  Pose pose;
  pose.header = openpose_header(137, width, height);
  pose.body.fps = fps;
  pose.body.tensor = std::move(t);
  return pose;
}

Pose parse_openpose_json(const nlohmann::json& doc, std::uint16_t fps,
                         std::uint16_t width, std::uint16_t height,
                         std::size_t max_people) {
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("frames")) {
      throw FormatError("monolithic OpenPose document needs a top-level array or a 'frames' member");
    }
    arr = &doc["frames"];
  }
  if (!arr->is_array()) throw FormatError("OpenPose frames must be a JSON array");
  std::vector<OpenPoseFrame> frames;
  frames.reserve(arr->size());
  for (const auto& f : *arr) frames.push_back(parse_openpose_frame(f));
  return parse_openpose(frames, fps, width, height, max_people);
}

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed JSON in " + path + ": " + e.what());
  }
}

} // namespace

Pose parse_openpose_file(const std::string& path, std::uint16_t fps,
                         std::uint16_t width, std::uint16_t height,
                         std::size_t max_people) {
  return parse_openpose_json(load_json(path), fps, width, height, max_people);
}

Pose parse_openpose_directory(const std::string& path, std::uint16_t fps,
                              std::uint16_t width, std::uint16_t height,
                              std::size_t max_people) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
  } catch (const fs::filesystem_error& e) {
    throw IoError("cannot list " + path + ": " + e.what());
  }
  if (files.empty()) throw ValueError("no frame JSON files in " + path);
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  std::vector<OpenPoseFrame> frames;
  frames.reserve(files.size());
  for (const auto& file : files) {
    try {
      frames.push_back(parse_openpose_frame(load_json(file.string())));
    } catch (const FormatError& e) {
      throw FormatError(file.string() + ": " + e.what());
    }
  }
  return parse_openpose(frames, fps, width, height, max_people);
}

} // namespace posekit
