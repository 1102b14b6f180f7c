#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace posekit {

/// Affine map y = M·x + b over 2 or 3 dimensions. The matrix is row-major
/// and only the leading dims×dims block (and first dims of b) is used.
/// Parameters are double precision; tensor storage stays float32.
struct Affine {
  int dims = 2;
  std::array<double, 9> m{};
  std::array<double, 3> b{};

  static Affine identity(int dims);
  static Affine translation(std::span<const double> offset);
  static Affine scaling(std::span<const double> factors);
  /// 2D: rotation by angle (radians, counter-clockwise). 3D: rotation about z.
  static Affine rotation(double angle, int dims);
  /// Rodrigues rotation about a unit axis, 3D only.
  static Affine rotation_about_axis(std::array<double, 3> axis, double angle);
  static Affine shear(double kx, double ky, int dims);
  static Affine reflection(int axis, int dims);

  /// outer ∘ inner: apply `inner` first. M = Mo·Mi, b = Mo·bi + bo.
  static Affine compose(const Affine& outer, const Affine& inner);

  double at(int r, int c) const { return m[static_cast<std::size_t>(r) * 3 + c]; }
  double& at(int r, int c) { return m[static_cast<std::size_t>(r) * 3 + c]; }
};

/// Mean of one point over all unmasked (frame, person) slots.
struct PointMean {
  std::array<double, 3> mean{};
  std::size_t count = 0;
};

/// Confidence-masked keypoint tensor.
///
/// Coordinates are frames×people×points×dims, confidences frames×people×points,
/// both float32. A slot with confidence 0 is "masked": its coordinates are
/// canonically stored as exact zeros. All operations preserve that form.
struct MaskedTensor {
  std::size_t frames = 0;
  std::size_t people = 0;
  std::size_t points = 0;
  int dims = 2;
  std::vector<float> data;        // frames*people*points*dims
  std::vector<float> confidence;  // frames*people*points

  static MaskedTensor zeroed(std::size_t frames, std::size_t people,
                             std::size_t points, int dims);

  std::size_t slots() const { return frames * people * points; }

  std::size_t slot_index(std::size_t f, std::size_t p, std::size_t k) const {
    return (f * people + p) * points + k;
  }

  float at(std::size_t f, std::size_t p, std::size_t k, int d) const {
    return data[slot_index(f, p, k) * dims + static_cast<std::size_t>(d)];
  }
  float& at(std::size_t f, std::size_t p, std::size_t k, int d) {
    return data[slot_index(f, p, k) * dims + static_cast<std::size_t>(d)];
  }
  float conf(std::size_t f, std::size_t p, std::size_t k) const {
    return confidence[slot_index(f, p, k)];
  }
  float& conf(std::size_t f, std::size_t p, std::size_t k) {
    return confidence[slot_index(f, p, k)];
  }

  /// Clamp confidences into [0,1] (NaN -> 0) and zero coordinates of masked
  /// slots. Decoding and ingestion funnel raw values through this.
  void canonicalize();

  bool operator==(const MaskedTensor&) const = default;
};

/// Map unmasked coordinates through y = M·x + b; masked slots stay exact zeros
/// and confidences are untouched.
MaskedTensor apply_affine(const MaskedTensor& t, const Affine& a);

/// Mean position of one point over every unmasked (frame, person) slot.
/// nullopt when the point is masked everywhere; 0 is a valid coordinate, so
/// "no data" is never conflated with a zero mean.
std::optional<PointMean> unmasked_mean(const MaskedTensor& t, std::size_t point);

/// Restrict to a strictly increasing subset of point indices.
MaskedTensor select_points(const MaskedTensor& t, std::span<const std::size_t> indices);

/// Additive Gaussian noise N(0, stddev²) on every unmasked coordinate.
/// Deterministic for a fixed seed regardless of thread count.
MaskedTensor add_noise(const MaskedTensor& t, double stddev, std::uint64_t seed);

} // namespace posekit
