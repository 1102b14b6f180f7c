#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "posekit/pose.hpp"

// OpenPose JSON ingestion: per-frame files or a monolithic frame array, into
// the 137-point (BODY_25 + FACE + two hands) layout.
namespace posekit {

/// One detected person: the four flat (x, y, confidence) triple arrays.
/// Missing arrays are kept empty and treated as all-zero.
struct OpenPosePerson {
  std::vector<float> pose_keypoints;        // 25*3 values
  std::vector<float> face_keypoints;        // 70*3
  std::vector<float> hand_left_keypoints;   // 21*3
  std::vector<float> hand_right_keypoints;  // 21*3
};

struct OpenPoseFrame {
  std::vector<OpenPosePerson> people;
};

/// Skeleton schema for the OpenPose layouts. 137 = BODY_25/FACE/HAND_LEFT/
/// HAND_RIGHT (25+70+21+21); 135 drops the two synthesized body midpoints
/// (Neck, MidHip), leaving a 23-point body. Point names, limb pairs and
/// colors are embedded conventions, not derived from any input.
Header openpose_header(int variant, std::uint16_t width = 0, std::uint16_t height = 0);

OpenPoseFrame parse_openpose_frame(const nlohmann::json& frame);

Pose parse_openpose(const std::vector<OpenPoseFrame>& frames, std::uint16_t fps,
                    std::uint16_t width, std::uint16_t height, std::size_t max_people);

/// Monolithic document: either a top-level array of frame objects or an
/// object carrying the array under "frames".
Pose parse_openpose_json(const nlohmann::json& doc, std::uint16_t fps,
                         std::uint16_t width, std::uint16_t height,
                         std::size_t max_people);

Pose parse_openpose_file(const std::string& path, std::uint16_t fps,
                         std::uint16_t width, std::uint16_t height,
                         std::size_t max_people);

/// Directory of per-frame *.json files, frames ordered by file name.
Pose parse_openpose_directory(const std::string& path, std::uint16_t fps,
                              std::uint16_t width, std::uint16_t height,
                              std::size_t max_people);

} // namespace posekit
