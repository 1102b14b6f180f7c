#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posekit/image.hpp"
#include "posekit/pose.hpp"

namespace posekit {

struct RenderOptions {
  std::array<std::uint8_t, 3> background{255, 255, 255};
  /// Dot radius in output pixels; 0 picks max(1, round(min(w,h)/150)).
  int point_radius = 0;
  /// Output pixels per pose unit. Coordinates are assumed to live in the
  /// header's width×height pixel space; normalized poses need an explicit
  /// scale (and usually a translate augmentation) to land on the canvas.
  double scale = 1.0;
  /// Draw only this person; all people when unset.
  std::optional<std::size_t> person;
};

/// Rasterize one frame: unmasked points as filled circles (component color
/// table, point i -> color[i mod colors], opacity = confidence), limbs as
/// lines in the start point's color when both endpoints are unmasked.
Image render_frame(const Pose& pose, std::size_t frame, const RenderOptions& opts = {});

/// All frames; rasterization is frame-parallel, output order is frame order.
std::vector<Image> render_frames(const Pose& pose, const RenderOptions& opts = {});

/// One PNG per frame: DIR/frame_000000.png, frame_000001.png, ...
void render_png_sequence(const Pose& pose, const std::string& dir,
                         const RenderOptions& opts = {});

/// Animated GIF, frame delay round(100/fps) centiseconds.
void render_gif(const Pose& pose, const std::string& path, const RenderOptions& opts = {});

} // namespace posekit
