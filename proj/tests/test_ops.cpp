#include <doctest.h>

#include <cmath>
#include <numbers>

#include "posekit/error.hpp"
#include "posekit/ops.hpp"
#include "test_util.hpp"

using namespace posekit;

namespace {

// Two-point skeleton ("L", "R") with explicit per-frame positions.
Pose two_point_pose(const std::vector<std::array<float, 4>>& frames_lr) {
  Pose pose;
  pose.header.width = 100;
  pose.header.height = 100;
  Component c;
  c.name = "BODY";
  c.format = "XYC";
  c.points = {"L", "R"};
  pose.header.components.push_back(c);
  pose.body.fps = 10;
  MaskedTensor t = MaskedTensor::zeroed(frames_lr.size(), 1, 2, 2);
  for (std::size_t f = 0; f < frames_lr.size(); ++f) {
    t.conf(f, 0, 0) = 1.0f;
    t.conf(f, 0, 1) = 1.0f;
    t.at(f, 0, 0, 0) = frames_lr[f][0];
    t.at(f, 0, 0, 1) = frames_lr[f][1];
    t.at(f, 0, 1, 0) = frames_lr[f][2];
    t.at(f, 0, 1, 1) = frames_lr[f][3];
  }
  pose.body.tensor = std::move(t);
  return pose;
}

const NormalizationInfo kLR{{"BODY", "L"}, {"BODY", "R"}};

// Post-hoc recomputation of the normalization statistics.
std::pair<double, std::array<double, 2>> reference_stats(const Pose& pose, std::size_t l,
                                                         std::size_t r) {
  const MaskedTensor& t = pose.body.tensor;
  double dist = 0;
  std::array<double, 2> mid{};
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.frames; ++f) {
    for (std::size_t p = 0; p < t.people; ++p) {
      if (t.conf(f, p, l) <= 0 || t.conf(f, p, r) <= 0) continue;
      dist += std::hypot(t.at(f, p, l, 0) - t.at(f, p, r, 0),
                         t.at(f, p, l, 1) - t.at(f, p, r, 1));
      mid[0] += 0.5 * (t.at(f, p, l, 0) + t.at(f, p, r, 0));
      mid[1] += 0.5 * (t.at(f, p, l, 1) + t.at(f, p, r, 1));
      ++n;
    }
  }
  return {dist / n, {mid[0] / n, mid[1] / n}};
}

} // namespace

TEST_CASE("normalize: the worked two-frame example") {
  // shoulders 2 apart around (1,1), then 4 apart around (3,3):
  // scale = 1/3, center = (2,2); distances become 2/3 and 4/3, mean 1.
  const Pose pose = two_point_pose({{0, 1, 2, 1}, {1, 3, 5, 3}});
  const Pose out = normalize(pose, kLR);

  const auto [mean_dist, mid] = reference_stats(out, 0, 1);
  CHECK(mean_dist == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(mid[0]) < 1e-6);
  CHECK(std::abs(mid[1]) < 1e-6);

  const double d0 = std::hypot(out.body.tensor.at(0, 0, 0, 0) - out.body.tensor.at(0, 0, 1, 0),
                               out.body.tensor.at(0, 0, 0, 1) - out.body.tensor.at(0, 0, 1, 1));
  const double d1 = std::hypot(out.body.tensor.at(1, 0, 0, 0) - out.body.tensor.at(1, 0, 1, 0),
                               out.body.tensor.at(1, 0, 0, 1) - out.body.tensor.at(1, 0, 1, 1));
  CHECK(d0 == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(d1 == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  // frame-1 left shoulder: ((0,1) - (2,2)) / 3 = (-2/3, -1/3)
  CHECK(out.body.tensor.at(0, 0, 0, 0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
  CHECK(out.body.tensor.at(0, 0, 0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-6));
  CHECK(out.header.width == pose.header.width);  // header untouched
}

TEST_CASE("normalize is idempotent and total on already-normalized input") {
  const Pose pose = two_point_pose({{-0.5f, 0, 0.5f, 0}, {-0.5f, 0.2f, 0.5f, -0.2f}});
  const Pose once = normalize(pose, kLR);
  const Pose twice = normalize(once, kLR);
  for (std::size_t i = 0; i < once.body.tensor.data.size(); ++i) {
    CHECK(std::abs(once.body.tensor.data[i] - twice.body.tensor.data[i]) < 1e-6);
  }
}

TEST_CASE("normalize error paths") {
  Pose pose = two_point_pose({{0, 0, 1, 0}});
  pose.body.tensor.confidence.assign(pose.body.tensor.confidence.size(), 0.0f);
  pose.body.tensor.data.assign(pose.body.tensor.data.size(), 0.0f);
  CHECK_THROWS_AS(normalize(pose, kLR), ValueError);  // no valid frames

  const Pose degenerate = two_point_pose({{2, 2, 2, 2}});
  CHECK_THROWS_AS(normalize(degenerate, kLR), ValueError);  // zero mean distance

  const Pose ok = two_point_pose({{0, 0, 1, 0}});
  try {
    normalize(ok, {{"BODY", "L"}, {"BODY", "nope"}});
    FAIL("missing point not diagnosed");
  } catch (const ValueError& e) {
    CHECK(std::string(e.what()).find("BODY:nope") != std::string::npos);
  }
}

TEST_CASE("normalize is invariant to input scale and translation") {
  std::mt19937_64 rng(23);
  const Pose pose = two_point_pose({{0, 1, 2, 1}, {1, 3, 5, 3}, {0, 0, 1, 2}});
  const Pose base = normalize(pose, kLR);
  for (const double s : {0.1, 3.0, 10.0}) {
    Affine a = Affine::scaling(std::array<double, 2>{s, s});
    a.b = {testutil::uniform(rng) * 10 - 5, testutil::uniform(rng) * 10 - 5, 0};
    Pose moved = pose;
    moved.body.tensor = apply_affine(pose.body.tensor, a);
    const Pose renorm = normalize(moved, kLR);
    for (std::size_t i = 0; i < base.body.tensor.data.size(); ++i) {
      CHECK(std::abs(base.body.tensor.data[i] - renorm.body.tensor.data[i]) < 1e-5);
    }
  }
}

namespace {

Pose plane_pose(std::array<float, 3> a, std::array<float, 3> b, std::array<float, 3> c) {
  Pose pose;
  pose.header.width = 10;
  pose.header.height = 10;
  pose.header.depth = 10;
  Component comp;
  comp.name = "TRI";
  comp.format = "XYZC";
  comp.points = {"A", "B", "C"};
  pose.header.components.push_back(comp);
  pose.body.fps = 1;
  MaskedTensor t = MaskedTensor::zeroed(1, 1, 3, 3);
  const std::array<float, 3> pts[3] = {a, b, c};
  for (std::size_t k = 0; k < 3; ++k) {
    t.conf(0, 0, k) = 1.0f;
    for (int d = 0; d < 3; ++d) t.at(0, 0, k, d) = pts[k][static_cast<std::size_t>(d)];
  }
  pose.body.tensor = std::move(t);
  return pose;
}

std::array<double, 3> triangle_normal(const MaskedTensor& t) {
  std::array<double, 3> a{}, b{}, c{};
  for (int d = 0; d < 3; ++d) {
    a[static_cast<std::size_t>(d)] = t.at(0, 0, 0, d);
    b[static_cast<std::size_t>(d)] = t.at(0, 0, 1, d);
    c[static_cast<std::size_t>(d)] = t.at(0, 0, 2, d);
  }
  const std::array<double, 3> ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const std::array<double, 3> ac{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  std::array<double, 3> n{ab[1] * ac[2] - ab[2] * ac[1], ab[2] * ac[0] - ab[0] * ac[2],
                          ab[0] * ac[1] - ab[1] * ac[0]};
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (double& v : n) v /= len;
  return n;
}

const PointRef kA{"TRI", "A"}, kB{"TRI", "B"}, kC{"TRI", "C"};

} // namespace

TEST_CASE("rotate_to_plane: worked example with normal (0,-1,0)") {
  const Pose pose = plane_pose({0, 0, 0}, {1, 0, 0}, {0, 0, 1});
  CHECK(triangle_normal(pose.body.tensor)[1] == doctest::Approx(-1.0));

  const Pose out = rotate_to_plane(pose, kA, kB, kC);
  const auto n = triangle_normal(out.body.tensor);
  CHECK(std::abs(n[0]) < 1e-6);
  CHECK(std::abs(n[1]) < 1e-6);
  CHECK(n[2] == doctest::Approx(1.0).epsilon(1e-6));

  // B stays at unit distance from A (isometry)
  const auto& t = out.body.tensor;
  const double ab = std::sqrt(std::pow(t.at(0, 0, 1, 0) - t.at(0, 0, 0, 0), 2) +
                              std::pow(t.at(0, 0, 1, 1) - t.at(0, 0, 0, 1), 2) +
                              std::pow(t.at(0, 0, 1, 2) - t.at(0, 0, 0, 2), 2));
  CHECK(ab == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("rotate_to_plane: identity when already aligned, flip when opposed") {
  const Pose flat = plane_pose({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  const Pose same = rotate_to_plane(flat, kA, kB, kC);
  for (std::size_t i = 0; i < flat.body.tensor.data.size(); ++i) {
    CHECK(std::abs(flat.body.tensor.data[i] - same.body.tensor.data[i]) < 1e-6);
  }

  const Pose upside_down = plane_pose({0, 0, 0}, {0, 1, 0}, {1, 0, 0});
  CHECK(triangle_normal(upside_down.body.tensor)[2] == doctest::Approx(-1.0));
  const Pose flipped = rotate_to_plane(upside_down, kA, kB, kC);
  CHECK(triangle_normal(flipped.body.tensor)[2] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("rotate_to_plane error paths") {
  const Pose coincident = plane_pose({1, 1, 1}, {1, 1, 1}, {0, 0, 1});
  CHECK_THROWS_AS(rotate_to_plane(coincident, kA, kB, kC), ValueError);

  const Pose collinear = plane_pose({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
  CHECK_THROWS_AS(rotate_to_plane(collinear, kA, kB, kC), ValueError);

  const Pose flat2d = two_point_pose({{0, 0, 1, 0}});
  CHECK_THROWS_AS(rotate_to_plane(flat2d, {"BODY", "L"}, {"BODY", "R"}, {"BODY", "L"}),
                  ValueError);
}

TEST_CASE("interpolate_fps: identity, doubling, and the worked gap example") {
  // fps 10 -> 20, point values 0 and 2 at frames 0,1 -> 0,1,2
  Pose ramp = two_point_pose({{0, 0, 5, 5}, {2, 2, 7, 7}});
  const Pose doubled = interpolate_fps(ramp, 20);
  CHECK(doubled.body.fps == 20);
  REQUIRE(doubled.body.frames() == 3);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(doubled.body.tensor.at(f, 0, 0, 0) == doctest::Approx(f).epsilon(1e-6));
    CHECK(doubled.body.tensor.at(f, 0, 1, 0) == doctest::Approx(5.0 + f).epsilon(1e-6));
  }

  const Pose same = interpolate_fps(ramp, ramp.body.fps);
  REQUIRE(same.body.frames() == ramp.body.frames());
  for (std::size_t i = 0; i < ramp.body.tensor.data.size(); ++i) {
    CHECK(std::abs(same.body.tensor.data[i] - ramp.body.tensor.data[i]) < 1e-6);
  }

  // values 0,_,4 with the middle masked: midpoints interpolate across the gap
  Pose gap = two_point_pose({{0, 0, 0, 0}, {9, 9, 9, 9}, {4, 4, 4, 4}});
  gap.body.tensor.conf(1, 0, 0) = 0.0f;
  gap.body.tensor.at(1, 0, 0, 0) = 0.0f;
  gap.body.tensor.at(1, 0, 0, 1) = 0.0f;
  const Pose resampled = interpolate_fps(gap, 20);  // t = 0, 0.5, ..., 2
  REQUIRE(resampled.body.frames() == 5);
  CHECK(resampled.body.tensor.at(1, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(resampled.body.tensor.at(3, 0, 0, 0) == doctest::Approx(3.0).epsilon(1e-6));
  // the exact hit on the masked source frame stays canonically masked
  CHECK(resampled.body.tensor.conf(2, 0, 0) == 0.0f);
  CHECK(resampled.body.tensor.at(2, 0, 0, 0) == 0.0f);

  Pose still = ramp;
  still.body.fps = 0;
  CHECK_THROWS_AS(interpolate_fps(still, 10), ValueError);
  CHECK_THROWS_AS(interpolate_fps(ramp, 0), ValueError);
}

TEST_CASE("round-trip resampling reproduces fully valid data") {
  std::mt19937_64 rng(29);
  testutil::PoseParams par;
  par.mask_prob = 0.0;
  Pose pose;
  pose.header = testutil::random_header(rng, 6, 2);
  pose.body.fps = 10;
  pose.body.tensor = testutil::random_tensor(rng, 9, 1, 6, 2, par);
  const Pose back = interpolate_fps(interpolate_fps(pose, 20), 10);
  REQUIRE(back.body.frames() == pose.body.frames());
  for (std::size_t i = 0; i < pose.body.tensor.data.size(); ++i) {
    CHECK(std::abs(back.body.tensor.data[i] - pose.body.tensor.data[i]) < 1e-5);
  }
}

TEST_CASE("frame dropout: boundaries, determinism, inverse bookkeeping") {
  std::mt19937_64 rng(31);
  Pose pose;
  pose.header = testutil::random_header(rng, 4, 2);
  pose.body.fps = 30;
  pose.body.tensor = testutil::random_tensor(rng, 24, 1, 4, 2);

  const DropoutResult none = frame_dropout(pose, 0.0, 7);
  CHECK(none.pose.body.frames() == 24);
  CHECK(none.dropped.empty());

  const DropoutResult all = frame_dropout(pose, 1.0, 7);
  CHECK(all.pose.body.frames() == 1);  // one survivor is always kept
  CHECK(all.dropped.size() == 23);

  const DropoutResult a = frame_dropout(pose, 0.5, 99);
  const DropoutResult b = frame_dropout(pose, 0.5, 99);
  CHECK(a.pose == b.pose);
  CHECK(a.dropped == b.dropped);
  CHECK(a.pose.body.frames() + a.dropped.size() == 24);

  CHECK_THROWS_AS(frame_dropout(pose, 1.5, 0), ValueError);
  Pose empty = pose;
  empty.body.tensor = MaskedTensor::zeroed(0, 1, 4, 2);
  CHECK_THROWS_AS(frame_dropout(empty, 0.5, 0), ValueError);
}

TEST_CASE("dropout retention count stays within 4 sigma of Binomial(F, 1/2)") {
  std::mt19937_64 rng(37);
  Pose pose;
  pose.header = testutil::random_header(rng, 2, 2);
  pose.body.fps = 30;
  pose.body.tensor = testutil::random_tensor(rng, 20, 1, 2, 2);

  const int trials = 10000;
  double retained = 0;
  for (int i = 0; i < trials; ++i) {
    retained += static_cast<double>(frame_dropout(pose, 0.5, static_cast<std::uint64_t>(i)).pose.body.frames());
  }
  const double mean = trials * 20 * 0.5;
  const double sigma = std::sqrt(trials * 20 * 0.25);
  CHECK(std::abs(retained - mean) < 4 * sigma);
}

TEST_CASE("augment: empty spec, rotation example, chained determinism") {
  const Pose pose = two_point_pose({{1, 0, 0, 1}});
  CHECK(augment(pose, {}) == pose);

  const Pose rot = augment(pose, {RotateStep{std::numbers::pi / 2}});
  CHECK(rot.body.tensor.at(0, 0, 0, 0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(rot.body.tensor.at(0, 0, 0, 1) == doctest::Approx(1.0).epsilon(1e-6));

  const AugmentationSpec chain{ScaleStep{{2, 0.5, 1}}, NoiseStep{0.1, 7},
                               TranslateStep{{1, 1, 0}}};
  CHECK(augment(pose, chain) == augment(pose, chain));

  const Pose reflected = augment(pose, {ReflectStep{0}});
  CHECK(reflected.body.tensor.at(0, 0, 0, 0) == doctest::Approx(-1.0));
  CHECK(reflected.body.tensor.at(0, 0, 1, 1) == doctest::Approx(1.0));

  const Pose sheared = augment(pose, {ShearStep{1.0, 0.0}});
  CHECK(sheared.body.tensor.at(0, 0, 1, 0) == doctest::Approx(1.0));  // (0,1) -> (1,1)

  CHECK_THROWS_AS(augment(pose, {DropoutStep{2.0, 1}}), ValueError);
  CHECK_THROWS_AS(augment(pose, {ReflectStep{2}}), ValueError);  // z-axis on 2D data
}

TEST_CASE("augmentation spec JSON parsing") {
  const auto spec = parse_augmentation_spec(nlohmann::json::parse(R"([
    {"type":"rotate","degrees":90},
    {"type":"scale","sx":1.5,"sy":0.5},
    {"type":"translate","offset":[1,2]},
    {"type":"shear","kx":0.1,"ky":0.2},
    {"type":"reflect","axis":"x"},
    {"type":"affine","matrix":[[1,0],[0,1]],"offset":[3,4]},
    {"type":"noise","stddev":0.05,"seed":11},
    {"type":"dropout","probability":0.25,"seed":12},
    {"type":"interpolate","fps":24}
  ])"));
  REQUIRE(spec.size() == 9);
  CHECK(std::get<RotateStep>(spec[0]).angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(std::get<ScaleStep>(spec[1]).factors[0] == 1.5);
  CHECK(std::get<ReflectStep>(spec[4]).axis == 0);
  CHECK(std::get<NoiseStep>(spec[6]).seed == 11);
  CHECK(std::get<InterpolateStep>(spec[8]).fps == 24);

  const auto wrapped = parse_augmentation_spec(
      nlohmann::json::parse(R"({"steps":[{"type":"rotate","degrees":10}]})"));
  CHECK(wrapped.size() == 1);

  CHECK_THROWS_AS(parse_augmentation_spec(nlohmann::json::parse(R"([{"type":"warp"}])")),
                  ValueError);
  CHECK_THROWS_AS(parse_augmentation_spec(nlohmann::json::parse(
                      R"([{"type":"dropout","probability":1.5,"seed":1}])")),
                  ValueError);
  CHECK_THROWS_AS(parse_augmentation_spec(nlohmann::json::parse(
                      R"([{"type":"noise","stddev":0.1}])")),
                  ValueError);  // seeds are mandatory
}

TEST_CASE("ops preserve the canonical mask everywhere") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 10; ++round) {
    Pose pose;
    pose.header = testutil::random_header(rng, 6, 2);
    pose.body.fps = 12;
    pose.body.tensor = testutil::random_tensor(rng, 8, 2, 6, 2);
    const AugmentationSpec spec{RotateStep{0.3}, NoiseStep{0.2, rng()},
                                InterpolateStep{18}, DropoutStep{0.3, rng()}};
    const Pose out = augment(pose, spec);
    const auto& t = out.body.tensor;
    for (std::size_t i = 0; i < t.slots(); ++i) {
      if (t.confidence[i] == 0.0f) {
        CHECK(t.data[i * 2] == 0.0f);
        CHECK(t.data[i * 2 + 1] == 0.0f);
      }
    }
  }
}
