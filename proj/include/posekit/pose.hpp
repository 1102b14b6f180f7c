#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "posekit/masked_tensor.hpp"

namespace posekit {

/// Edge between two points of the same component, by local point index.
struct Limb {
  std::uint16_t from = 0;
  std::uint16_t to = 0;
  bool operator==(const Limb&) const = default;
};

/// RGB color; channels are 0..255 but serialized as uint16 per the format.
struct Color {
  std::uint16_t r = 0, g = 0, b = 0;
  bool operator==(const Color&) const = default;
};

/// Named group of keypoints (e.g. FACE) with its limb graph and color table.
struct Component {
  std::string name;
  std::string format;  // one char per channel, e.g. "XYC" or "XYZC"
  std::vector<std::string> points;
  std::vector<Limb> limbs;
  std::vector<Color> colors;

  /// Channels minus the trailing confidence channel.
  int dims() const { return static_cast<int>(format.size()) - 1; }

  bool operator==(const Component&) const = default;
};

/// Skeleton schema: what the numbers in the body mean.
struct Header {
  float version = 0.1f;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint16_t depth = 0;  // 0 for 2D data
  std::vector<Component> components;

  std::size_t total_points() const;
  int dims() const;  // dims of the first component (all must agree)

  /// Flat point index of (component name, point name), or nullopt.
  std::optional<std::size_t> point_index(std::string_view component,
                                         std::string_view point) const;

  bool operator==(const Header&) const = default;
};

/// Frame rate plus the masked frame tensor. The people extent lives in the
/// tensor; fps 0 is allowed for single-image poses but rejected by temporal ops.
struct Body {
  std::uint16_t fps = 0;
  MaskedTensor tensor;

  std::size_t people() const { return tensor.people; }
  std::size_t frames() const { return tensor.frames; }

  bool operator==(const Body&) const = default;
};

/// A complete pose document.
struct Pose {
  Header header;
  Body body;

  bool operator==(const Pose&) const = default;
};

} // namespace posekit
