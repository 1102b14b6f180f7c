#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace posekit {

/// Plain interleaved RGB8 raster.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;  // width*height*3, row-major

  static Image filled(std::uint32_t w, std::uint32_t h, std::uint8_t r,
                      std::uint8_t g, std::uint8_t b);

  std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  bool operator==(const Image&) const = default;
};

/// Truecolor PNG, zlib-compressed, no filtering. Deterministic output.
std::vector<std::uint8_t> encode_png(const Image& image);
void write_png_file(const std::string& path, const Image& image);

/// Animated GIF89a with an infinite loop and a global 256-color palette
/// computed from the first frame. All frames must share one size.
/// `delay_cs` is the per-frame delay in centiseconds.
std::vector<std::uint8_t> encode_gif(std::span<const Image> frames, int delay_cs);
void write_gif_file(const std::string& path, std::span<const Image> frames, int delay_cs);

} // namespace posekit
