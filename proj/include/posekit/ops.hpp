#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "posekit/pose.hpp"

namespace posekit {

/// A point addressed as (component name, point name); "COMP:POINT" in the CLI.
struct PointRef {
  std::string component;
  std::string point;

  std::string str() const { return component + ":" + point; }
};

struct NormalizationInfo {
  PointRef left;
  PointRef right;
};

/// Similarity transform making the mean distance between the two reference
/// points 1 and their mean midpoint the origin. Statistics pool every frame
/// and person where both references are unmasked.
Pose normalize(const Pose& pose, const NormalizationInfo& info);

/// 3D only: global rotation taking the normal of the plane through the three
/// points' mean positions to (0,0,1).
Pose rotate_to_plane(const Pose& pose, const PointRef& p1, const PointRef& p2,
                     const PointRef& p3);

/// Linear resampling to a new frame rate. Output frame j samples source time
/// j*fps/new_fps; coordinates interpolate over each point's unmasked support,
/// confidence over the raw signal. fps 0 (single-image pose) is rejected.
Pose interpolate_fps(const Pose& pose, std::uint16_t new_fps);

struct DropoutResult {
  Pose pose;
  std::vector<std::size_t> dropped;  // removed frame indices, ascending
};

/// Remove each frame independently with the given probability; at least one
/// frame is always retained. Deterministic for a fixed seed.
DropoutResult frame_dropout(const Pose& pose, double probability, std::uint64_t seed);

/// Gaussian noise on unmasked coordinates (see MaskedTensor add_noise).
Pose add_noise(const Pose& pose, double stddev, std::uint64_t seed);

// Augmentation pipeline steps, applied left to right.
struct AffineStep { Affine transform; };
struct RotateStep { double angle; };                       // radians; about z in 3D
struct ScaleStep { std::array<double, 3> factors{1, 1, 1}; };
struct TranslateStep { std::array<double, 3> offset{}; };
struct ShearStep { double kx = 0, ky = 0; };
struct ReflectStep { int axis = 0; };
struct NoiseStep { double stddev = 0; std::uint64_t seed = 0; };
struct DropoutStep { double probability = 0; std::uint64_t seed = 0; };
struct InterpolateStep { std::uint16_t fps = 1; };

using AugmentStep =
    std::variant<AffineStep, RotateStep, ScaleStep, TranslateStep, ShearStep,
                 ReflectStep, NoiseStep, DropoutStep, InterpolateStep>;

using AugmentationSpec = std::vector<AugmentStep>;

/// Throws ValueError on out-of-range parameters (probability, stddev, fps).
void validate_spec(const AugmentationSpec& spec);

/// Parse the JSON pipeline description accepted by `posekit augment --spec`.
/// Either a top-level array of steps or {"steps": [...]}; each step is an
/// object with "type" plus parameters, e.g. {"type":"rotate","degrees":90}.
AugmentationSpec parse_augmentation_spec(const nlohmann::json& j);

Pose augment(const Pose& pose, const AugmentationSpec& spec);

} // namespace posekit
