#include <doctest.h>

#include <cmath>

#include "gif_png_readers.hpp"
#include "posekit/error.hpp"
#include "posekit/render.hpp"
#include "test_util.hpp"

using namespace posekit;

namespace {

// Single-person pose on a 100x100 canvas with per-point colors.
Pose dots_pose(const std::vector<std::array<float, 3>>& points_xyc,
               const std::vector<Limb>& limbs = {}) {
  Pose pose;
  pose.header.width = 100;
  pose.header.height = 100;
  Component c;
  c.name = "DOTS";
  c.format = "XYC";
  for (std::size_t i = 0; i < points_xyc.size(); ++i) {
    c.points.push_back("d" + std::to_string(i));
    c.colors.push_back({static_cast<std::uint16_t>(40 * (i + 1) % 256), 0, 200});
  }
  c.limbs = limbs;
  pose.header.components.push_back(c);
  pose.body.fps = 10;
  MaskedTensor t = MaskedTensor::zeroed(1, 1, points_xyc.size(), 2);
  for (std::size_t i = 0; i < points_xyc.size(); ++i) {
    t.at(0, 0, i, 0) = points_xyc[i][0];
    t.at(0, 0, i, 1) = points_xyc[i][1];
    t.conf(0, 0, i) = points_xyc[i][2];
  }
  pose.body.tensor = std::move(t);
  return pose;
}

std::size_t non_background(const Image& img, std::array<std::uint8_t, 3> bg = {255, 255, 255}) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    if (img.rgb[i] != bg[0] || img.rgb[i + 1] != bg[1] || img.rgb[i + 2] != bg[2]) ++n;
  }
  return n;
}

} // namespace

TEST_CASE("a fully masked frame renders as pure background") {
  const Pose pose = dots_pose({{50, 50, 0}, {20, 20, 0}});
  const Image img = render_frame(pose, 0);
  CHECK(img.width == 100);
  CHECK(img.height == 100);
  CHECK(non_background(img) == 0);
}

TEST_CASE("a single confident point paints its color at the center") {
  Pose pose = dots_pose({{50, 50, 1}});
  pose.header.components[0].colors = {{255, 0, 0}};
  const Image img = render_frame(pose, 0);
  const std::uint8_t* px = img.pixel(50, 50);
  CHECK(px[0] == 255);
  CHECK(px[1] == 0);
  CHECK(px[2] == 0);
  CHECK(non_background(img) > 0);
}

TEST_CASE("confidence maps to opacity over the background") {
  Pose pose = dots_pose({{50, 50, 0.5f}});
  pose.header.components[0].colors = {{0, 0, 0}};
  const Image img = render_frame(pose, 0);
  const std::uint8_t* px = img.pixel(50, 50);
  CHECK(static_cast<int>(px[0]) == 128);  // halfway between black and white
}

TEST_CASE("limbs cover at least the Chebyshev distance and skip masked endpoints") {
  const Pose pose = dots_pose({{10, 20, 1}, {40, 30, 1}}, {{0, 1}});
  Image img = render_frame(pose, 0);
  CHECK(non_background(img) >= 30);  // Chebyshev distance of the segment

  // horizontal limb: every pixel between the endpoints is painted
  Pose flat = dots_pose({{10, 50, 1}, {40, 50, 1}}, {{0, 1}});
  const Image line = render_frame(flat, 0);
  for (long x = 10; x <= 40; ++x) {
    const std::uint8_t* px = line.pixel(static_cast<std::uint32_t>(x), 50);
    CHECK((px[0] != 255 || px[1] != 255 || px[2] != 255));
  }

  Pose masked = dots_pose({{10, 50, 1}, {40, 50, 0}}, {{0, 1}});
  const Image none = render_frame(masked, 0);
  const std::uint8_t* mid = none.pixel(25, 50);
  CHECK(mid[0] == 255);  // no limb without both endpoints
}

TEST_CASE("masked point renders exactly like a deleted point") {
  // mask the last point (per-point colors, no limbs touching it)
  const Pose with_masked =
      dots_pose({{30, 30, 1}, {60, 60, 1}, {80, 20, 0}}, {{0, 1}});
  Pose without = dots_pose({{30, 30, 1}, {60, 60, 1}}, {{0, 1}});
  without.header.components[0].colors = with_masked.header.components[0].colors;
  without.header.components[0].colors.resize(2);
  CHECK(encode_png(render_frame(with_masked, 0)) == encode_png(render_frame(without, 0)));
}

TEST_CASE("rendering is deterministic and does not mutate the pose") {
  std::mt19937_64 rng(43);
  Pose pose;
  pose.header = testutil::random_header(rng, 12, 2);
  pose.header.width = 64;
  pose.header.height = 64;
  pose.body.fps = 10;
  testutil::PoseParams par;
  par.coord_span = 60;
  pose.body.tensor = testutil::random_tensor(rng, 3, 2, 12, 2, par);
  const Pose copy = pose;
  const auto a = encode_png(render_frame(pose, 1));
  const auto b = encode_png(render_frame(pose, 1));
  CHECK(a == b);
  CHECK(pose == copy);
}

TEST_CASE("PNG output survives an independent re-read") {
  const Pose pose = dots_pose({{50, 50, 1}, {20, 70, 0.7f}}, {{0, 1}});
  const Image img = render_frame(pose, 0);
  const auto png = encode_png(img);
  const testutil::PngImage back = testutil::read_png(png);
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.rgb == img.rgb);
}

TEST_CASE("scale stretches the canvas and the coordinates") {
  const Pose pose = dots_pose({{50, 50, 1}});
  RenderOptions opts;
  opts.scale = 2.0;
  const Image img = render_frame(pose, 0, opts);
  CHECK(img.width == 200);
  CHECK(img.height == 200);
  const std::uint8_t* px = img.pixel(100, 100);
  CHECK((px[0] != 255 || px[1] != 255 || px[2] != 255));
}

TEST_CASE("render error paths") {
  const Pose pose = dots_pose({{50, 50, 1}});
  CHECK_THROWS_AS(render_frame(pose, 5), ValueError);
  Pose flat = pose;
  flat.header.width = 0;
  CHECK_THROWS_AS(render_frame(flat, 0), ValueError);
  RenderOptions opts;
  opts.scale = 0;
  CHECK_THROWS_AS(render_frame(pose, 0, opts), ValueError);
}

TEST_CASE("GIF: delay arithmetic, frame count, and exact pixels") {
  // 10 frames at fps 10 -> 10 cs delay
  Pose pose = dots_pose({{50, 50, 1}, {20, 20, 1}}, {{0, 1}});
  MaskedTensor t = MaskedTensor::zeroed(10, 1, 2, 2);
  for (std::size_t f = 0; f < 10; ++f) {
    for (std::size_t k = 0; k < 2; ++k) {
      t.conf(f, 0, k) = 1.0f;
      t.at(f, 0, k, 0) = static_cast<float>(10 + 5 * f + 30 * k);
      t.at(f, 0, k, 1) = static_cast<float>(20 + 3 * f);
    }
  }
  pose.body.tensor = t;

  const std::vector<Image> frames = render_frames(pose);
  const auto gif = encode_gif(frames, 10);
  const testutil::GifData data = testutil::read_gif(gif);
  CHECK(data.width == 100);
  CHECK(data.height == 100);
  REQUIRE(data.frames.size() == 10);
  for (const auto& f : data.frames) CHECK(f.delay_cs == 10);

  // conf-1 drawing uses exact palette colors, so decode must be lossless
  for (std::size_t f = 0; f < frames.size(); ++f) {
    REQUIRE(data.frames[f].indices.size() == frames[f].rgb.size() / 3);
    for (std::size_t i = 0; i < data.frames[f].indices.size(); ++i) {
      const auto& entry = data.palette[data.frames[f].indices[i]];
      CHECK(entry[0] == frames[f].rgb[i * 3]);
      CHECK(entry[1] == frames[f].rgb[i * 3 + 1]);
      CHECK(entry[2] == frames[f].rgb[i * 3 + 2]);
    }
  }
}

TEST_CASE("GIF frame counts match the pose for random lengths in 1..50") {
  std::mt19937_64 rng(53);
  std::vector<std::size_t> lengths{1, 50};
  for (int i = 0; i < 4; ++i) lengths.push_back(1 + rng() % 50);
  for (const std::size_t frames : lengths) {
    Pose pose = dots_pose({{50, 50, 1}});
    pose.body.tensor = MaskedTensor::zeroed(frames, 1, 1, 2);
    for (std::size_t f = 0; f < frames; ++f) {
      pose.body.tensor.conf(f, 0, 0) = 1.0f;
      pose.body.tensor.at(f, 0, 0, 0) = static_cast<float>(f % 90);
      pose.body.tensor.at(f, 0, 0, 1) = static_cast<float>((3 * f) % 90);
    }
    const auto gif = encode_gif(render_frames(pose), 4);
    CHECK(testutil::read_gif(gif).frames.size() == frames);
  }
}

TEST_CASE("GIF quantization path: >256 colors fall back to the fixed cube") {
  Image gradient;
  gradient.width = 64;
  gradient.height = 64;
  gradient.rgb.resize(64 * 64 * 3);
  for (std::uint32_t y = 0; y < 64; ++y) {
    for (std::uint32_t x = 0; x < 64; ++x) {
      gradient.rgb[(y * 64 + x) * 3] = static_cast<std::uint8_t>(x * 4);
      gradient.rgb[(y * 64 + x) * 3 + 1] = static_cast<std::uint8_t>(y * 4);
      gradient.rgb[(y * 64 + x) * 3 + 2] = static_cast<std::uint8_t>((x + y) * 2);
    }
  }
  const auto gif = encode_gif(std::span(&gradient, 1), 5);
  const testutil::GifData data = testutil::read_gif(gif);
  REQUIRE(data.frames.size() == 1);
  for (std::size_t i = 0; i < data.frames[0].indices.size(); ++i) {
    const auto& entry = data.palette[data.frames[0].indices[i]];
    CHECK(std::abs(entry[0] - gradient.rgb[i * 3]) <= 30);
    CHECK(std::abs(entry[1] - gradient.rgb[i * 3 + 1]) <= 30);
    CHECK(std::abs(entry[2] - gradient.rgb[i * 3 + 2]) <= 30);
  }
}
