#include "posekit/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "posekit/error.hpp"

namespace posekit {

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

void blend_pixel(Image& img, long x, long y, Rgb c, double alpha) {
  if (x < 0 || y < 0 || x >= static_cast<long>(img.width) || y >= static_cast<long>(img.height)) {
    return;
  }
  std::uint8_t* px = img.pixel(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
  px[0] = static_cast<std::uint8_t>(std::lround(px[0] + (c.r - px[0]) * alpha));
  px[1] = static_cast<std::uint8_t>(std::lround(px[1] + (c.g - px[1]) * alpha));
  px[2] = static_cast<std::uint8_t>(std::lround(px[2] + (c.b - px[2]) * alpha));
}

void draw_disc(Image& img, long cx, long cy, int radius, Rgb c, double alpha) {
  const long r = radius;
  for (long dy = -r; dy <= r; ++dy) {
    for (long dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r * r) blend_pixel(img, cx + dx, cy + dy, c, alpha);
    }
  }
}

void draw_line(Image& img, long x0, long y0, long x1, long y1, Rgb c, double alpha) {
  // Bresenham; visits max(|dx|,|dy|)+1 pixels.
  const long dx = std::abs(x1 - x0);
  const long dy = -std::abs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1;
  const long sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  long x = x0, y = y0;
  while (true) {
    blend_pixel(img, x, y, c, alpha);
    if (x == x1 && y == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

Rgb component_color(const Component& comp, std::size_t local_point) {
  if (comp.colors.empty()) return Rgb{0, 0, 0};
  const Color& c = comp.colors[local_point % comp.colors.size()];
  return Rgb{static_cast<std::uint8_t>(c.r), static_cast<std::uint8_t>(c.g),
             static_cast<std::uint8_t>(c.b)};
}

} // namespace

namespace {

void check_renderable(const Pose& pose, const RenderOptions& opts) {
  if (pose.header.width == 0 || pose.header.height == 0) {
    throw ValueError("cannot render onto a zero-sized canvas (header width/height are 0)");
  }
  if (opts.scale <= 0.0) throw ValueError("render scale must be > 0");
}

} // namespace

Image render_frame(const Pose& pose, std::size_t frame, const RenderOptions& opts) {
  const MaskedTensor& t = pose.body.tensor;
  if (frame >= t.frames) {
    throw ValueError("frame " + std::to_string(frame) + " out of range (frames = " +
                     std::to_string(t.frames) + ")");
  }
  check_renderable(pose, opts);

  const auto ow = static_cast<std::uint32_t>(
      std::max(1L, std::lround(pose.header.width * opts.scale)));
  const auto oh = static_cast<std::uint32_t>(
      std::max(1L, std::lround(pose.header.height * opts.scale)));
  Image img = Image::filled(ow, oh, opts.background[0], opts.background[1], opts.background[2]);

  const int radius = opts.point_radius > 0
                         ? opts.point_radius
                         : static_cast<int>(std::max(1L, std::lround(std::min(ow, oh) / 150.0)));

  const auto px = [&](std::size_t p, std::size_t k, int d) {
    return std::lround(static_cast<double>(t.at(frame, p, k, d)) * opts.scale);
  };
  const auto finite = [&](std::size_t p, std::size_t k) {
    return std::isfinite(t.at(frame, p, k, 0)) && std::isfinite(t.at(frame, p, k, 1));
  };

  const std::size_t p_begin = opts.person.value_or(0);
  const std::size_t p_end = opts.person ? std::min(*opts.person + 1, t.people) : t.people;
  for (std::size_t p = p_begin; p < p_end; ++p) {
    std::size_t base = 0;
    for (const Component& comp : pose.header.components) {
      // Limbs first so the dots sit on top of the joints.
      for (const Limb& limb : comp.limbs) {
        const std::size_t a = base + limb.from;
        const std::size_t b = base + limb.to;
        const float ca = t.conf(frame, p, a);
        const float cb = t.conf(frame, p, b);
        if (ca <= 0.0f || cb <= 0.0f || !finite(p, a) || !finite(p, b)) continue;
        draw_line(img, px(p, a, 0), px(p, a, 1), px(p, b, 0), px(p, b, 1),
                  component_color(comp, limb.from), std::min(1.0, 0.5 * (ca + cb)));
      }
      for (std::size_t i = 0; i < comp.points.size(); ++i) {
        const std::size_t k = base + i;
        const float c = t.conf(frame, p, k);
        if (c <= 0.0f || !finite(p, k)) continue;
        draw_disc(img, px(p, k, 0), px(p, k, 1), radius, component_color(comp, i),
                  std::min(1.0f, c));
      }
      base += comp.points.size();
    }
  }
  return img;
}

std::vector<Image> render_frames(const Pose& pose, const RenderOptions& opts) {
  check_renderable(pose, opts);  // nothing may throw inside the parallel loop
  std::vector<Image> out(pose.body.tensor.frames);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t f = 0; f < static_cast<std::int64_t>(out.size()); ++f) {
    out[static_cast<std::size_t>(f)] = render_frame(pose, static_cast<std::size_t>(f), opts);
  }
  return out;
}

void render_png_sequence(const Pose& pose, const std::string& dir, const RenderOptions& opts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  const std::vector<Image> frames = render_frames(pose, opts);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu.png", f);
    write_png_file((fs::path(dir) / name).string(), frames[f]);
  }
}

void render_gif(const Pose& pose, const std::string& path, const RenderOptions& opts) {
  if (pose.body.fps == 0) throw ValueError("cannot animate a pose with fps 0");
  if (pose.body.tensor.frames == 0) throw ValueError("cannot animate an empty pose");
  const int delay_cs = static_cast<int>(std::lround(100.0 / pose.body.fps));
  const std::vector<Image> frames = render_frames(pose, opts);
  write_gif_file(path, frames, delay_cs);
}

} // namespace posekit
