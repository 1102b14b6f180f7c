#include "posekit/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "posekit/error.hpp"
#include "posekit/kernels.hpp"

namespace posekit {

namespace {

std::size_t resolve_point(const Header& header, const PointRef& ref) {
  if (const auto idx = header.point_index(ref.component, ref.point)) return *idx;
  throw ValueError("unknown point '" + ref.str() + "'");
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

Pose with_tensor(const Pose& pose, MaskedTensor tensor) {
  Pose out = pose;
  out.body.tensor = std::move(tensor);
  return out;
}

} // namespace

Pose normalize(const Pose& pose, const NormalizationInfo& info) {
  const std::size_t left = resolve_point(pose.header, info.left);
  const std::size_t right = resolve_point(pose.header, info.right);
  if (left == right) {
    throw ValueError("normalization points must be distinct, got '" + info.left.str() +
                     "' twice");
  }
  const MaskedTensor& t = pose.body.tensor;
  const int dims = t.dims;

  double dist_sum = 0.0;
  std::array<double, 3> mid_sum{};
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.frames; ++f) {
    for (std::size_t p = 0; p < t.people; ++p) {
      if (t.conf(f, p, left) <= 0.0f || t.conf(f, p, right) <= 0.0f) continue;
      double d2 = 0.0;
      for (int d = 0; d < dims; ++d) {
        const double a = t.at(f, p, left, d);
        const double b = t.at(f, p, right, d);
        d2 += (a - b) * (a - b);
        mid_sum[static_cast<std::size_t>(d)] += 0.5 * (a + b);
      }
      dist_sum += std::sqrt(d2);
      ++n;
    }
  }
  if (n == 0) {
    throw ValueError("no reference data: '" + info.left.str() + "' and '" + info.right.str() +
                     "' are never unmasked together");
  }
  const double mean_dist = dist_sum / static_cast<double>(n);
  if (mean_dist == 0.0) {
    throw ValueError("degenerate skeleton: reference points coincide in every valid frame");
  }

  const double s = 1.0 / mean_dist;
  Affine a = Affine::identity(dims);
  for (int d = 0; d < dims; ++d) {
    a.at(d, d) = s;
    a.b[static_cast<std::size_t>(d)] = -s * (mid_sum[static_cast<std::size_t>(d)] / static_cast<double>(n));
  }
  return with_tensor(pose, apply_affine(t, a));
}

Pose rotate_to_plane(const Pose& pose, const PointRef& p1, const PointRef& p2,
                     const PointRef& p3) {
  const MaskedTensor& t = pose.body.tensor;
  if (t.dims != 3) throw ValueError("plane alignment requires 3D data");

  std::array<std::array<double, 3>, 3> mean_pos;
  const PointRef* refs[3] = {&p1, &p2, &p3};
  for (int i = 0; i < 3; ++i) {
    const std::size_t idx = resolve_point(pose.header, *refs[i]);
    const auto m = unmasked_mean(t, idx);
    if (!m) throw ValueError("no reference data: '" + refs[i]->str() + "' is always masked");
    mean_pos[static_cast<std::size_t>(i)] = m->mean;
  }

  std::array<double, 3> ab, ac;
  for (int d = 0; d < 3; ++d) {
    ab[static_cast<std::size_t>(d)] = mean_pos[1][static_cast<std::size_t>(d)] - mean_pos[0][static_cast<std::size_t>(d)];
    ac[static_cast<std::size_t>(d)] = mean_pos[2][static_cast<std::size_t>(d)] - mean_pos[0][static_cast<std::size_t>(d)];
  }
  const std::array<double, 3> n = cross(ab, ac);
  const double nn = norm3(n);
  const double scale = norm3(ab) * norm3(ac);
  if (scale == 0.0 || nn / scale < 1e-9) {
    throw ValueError("degenerate plane: the three reference points are collinear or coincide");
  }
  const std::array<double, 3> unit{n[0] / nn, n[1] / nn, n[2] / nn};
  const double dot = std::clamp(unit[2], -1.0, 1.0);  // n̂ · (0,0,1)

  Affine rot;
  if (dot >= 1.0 - 1e-12) {
    rot = Affine::identity(3);
  } else if (dot <= -1.0 + 1e-12) {
    rot = Affine::rotation_about_axis({1.0, 0.0, 0.0}, std::numbers::pi);
  } else {
    rot = Affine::rotation_about_axis({unit[1], -unit[0], 0.0}, std::acos(dot));
  }
  return with_tensor(pose, apply_affine(t, rot));
}

Pose interpolate_fps(const Pose& pose, std::uint16_t new_fps) {
  if (new_fps == 0) throw ValueError("new fps must be >= 1");
  if (pose.body.fps == 0) {
    throw ValueError("cannot resample a single-image pose (fps 0)");
  }
  const MaskedTensor& t = pose.body.tensor;
  if (t.frames == 0) throw ValueError("cannot resample an empty pose");

  const std::uint64_t out_frames =
      (static_cast<std::uint64_t>(t.frames - 1) * new_fps) / pose.body.fps + 1;
  const double step = static_cast<double>(pose.body.fps) / static_cast<double>(new_fps);

  MaskedTensor out = MaskedTensor::zeroed(out_frames, t.people, t.points, t.dims);
  kernels::resample(t.data.data(), t.confidence.data(), out.data.data(),
                    out.confidence.data(), t.frames, out_frames, t.people, t.points,
                    t.dims, step);
  Pose r = pose;
  r.body.fps = new_fps;
  r.body.tensor = std::move(out);
  return r;
}

DropoutResult frame_dropout(const Pose& pose, double probability, std::uint64_t seed) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ValueError("dropout probability must be in [0,1]");
  }
  const MaskedTensor& t = pose.body.tensor;
  if (t.frames == 0) throw ValueError("cannot drop frames from an empty pose");

  // Explicit uniform mapping instead of std::bernoulli_distribution so the
  // kept set is identical across standard library implementations.
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<std::size_t> kept, dropped;
  for (std::size_t f = 0; f < t.frames; ++f) {
    (uniform() < probability ? dropped : kept).push_back(f);
  }
  if (kept.empty()) {
    const std::size_t survivor = static_cast<std::size_t>(rng() % t.frames);
    kept.push_back(survivor);
    dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(survivor));
  }

  MaskedTensor out = MaskedTensor::zeroed(kept.size(), t.people, t.points, t.dims);
  const std::size_t row_f = t.people * t.points * static_cast<std::size_t>(t.dims);
  const std::size_t row_c = t.people * t.points;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::memcpy(out.data.data() + i * row_f, t.data.data() + kept[i] * row_f,
                row_f * sizeof(float));
    std::memcpy(out.confidence.data() + i * row_c, t.confidence.data() + kept[i] * row_c,
                row_c * sizeof(float));
  }
  return DropoutResult{with_tensor(pose, std::move(out)), std::move(dropped)};
}

Pose add_noise(const Pose& pose, double stddev, std::uint64_t seed) {
  return with_tensor(pose, add_noise(pose.body.tensor, stddev, seed));
}

void validate_spec(const AugmentationSpec& spec) {
  for (const auto& step : spec) {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, NoiseStep>) {
            if (!(s.stddev >= 0.0)) throw ValueError("noise stddev must be >= 0");
          } else if constexpr (std::is_same_v<T, DropoutStep>) {
            if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
              throw ValueError("dropout probability must be in [0,1]");
            }
          } else if constexpr (std::is_same_v<T, InterpolateStep>) {
            if (s.fps == 0) throw ValueError("interpolate fps must be >= 1");
          }
        },
        step);
  }
}

Pose augment(const Pose& pose, const AugmentationSpec& spec) {
  validate_spec(spec);
  Pose cur = pose;
  const auto affine = [&cur](const Affine& a) {
    cur.body.tensor = apply_affine(cur.body.tensor, a);
  };
  for (const auto& step : spec) {
    const int dims = cur.body.tensor.dims;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, AffineStep>) {
            affine(s.transform);
          } else if constexpr (std::is_same_v<T, RotateStep>) {
            affine(Affine::rotation(s.angle, dims));
          } else if constexpr (std::is_same_v<T, ScaleStep>) {
            affine(Affine::scaling(std::span(s.factors.data(), static_cast<std::size_t>(dims))));
          } else if constexpr (std::is_same_v<T, TranslateStep>) {
            affine(Affine::translation(std::span(s.offset.data(), static_cast<std::size_t>(dims))));
          } else if constexpr (std::is_same_v<T, ShearStep>) {
            affine(Affine::shear(s.kx, s.ky, dims));
          } else if constexpr (std::is_same_v<T, ReflectStep>) {
            affine(Affine::reflection(s.axis, dims));
          } else if constexpr (std::is_same_v<T, NoiseStep>) {
            cur = add_noise(cur, s.stddev, s.seed);
          } else if constexpr (std::is_same_v<T, DropoutStep>) {
            cur = frame_dropout(cur, s.probability, s.seed).pose;
          } else if constexpr (std::is_same_v<T, InterpolateStep>) {
            cur = interpolate_fps(cur, s.fps);
          }
        },
        step);
  }
  return cur;
}

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValueError(std::string("augmentation step needs numeric '") + key + "'");
  }
  return j[key].get<double>();
}

std::uint64_t require_seed(const nlohmann::json& j) {
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    throw ValueError("augmentation step needs an unsigned 'seed'");
  }
  return j["seed"].get<std::uint64_t>();
}

AugmentStep parse_step(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ValueError("augmentation step must be an object with a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "affine") {
    const auto& m = j.at("matrix");
    if (!m.is_array() || (m.size() != 2 && m.size() != 3)) {
      throw ValueError("affine 'matrix' must be a 2x2 or 3x3 array of rows");
    }
    Affine a = Affine::identity(static_cast<int>(m.size()));
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (!m[r].is_array() || m[r].size() != m.size()) {
        throw ValueError("affine 'matrix' rows must all have the matrix dimension");
      }
      for (std::size_t c = 0; c < m.size(); ++c) {
        a.at(static_cast<int>(r), static_cast<int>(c)) = m[r][c].get<double>();
      }
    }
    if (j.contains("offset")) {
      const auto& b = j["offset"];
      if (!b.is_array() || b.size() != m.size()) {
        throw ValueError("affine 'offset' must match the matrix dimension");
      }
      for (std::size_t i = 0; i < b.size(); ++i) a.b[i] = b[i].get<double>();
    }
    return AffineStep{a};
  }
  if (type == "rotate") {
    if (j.contains("radians")) return RotateStep{j["radians"].get<double>()};
    return RotateStep{require_number(j, "degrees") * std::numbers::pi / 180.0};
  }
  if (type == "scale") {
    ScaleStep s;
    s.factors[0] = require_number(j, "sx");
    s.factors[1] = require_number(j, "sy");
    s.factors[2] = j.contains("sz") ? j["sz"].get<double>() : 1.0;
    return s;
  }
  if (type == "translate") {
    const auto& b = j.at("offset");
    if (!b.is_array() || (b.size() != 2 && b.size() != 3)) {
      throw ValueError("translate 'offset' must have 2 or 3 entries");
    }
    TranslateStep s;
    for (std::size_t i = 0; i < b.size(); ++i) s.offset[i] = b[i].get<double>();
    return s;
  }
  if (type == "shear") return ShearStep{require_number(j, "kx"), require_number(j, "ky")};
  if (type == "reflect") {
    if (j.contains("axis") && j["axis"].is_string()) {
      const std::string ax = j["axis"].get<std::string>();
      if (ax == "x") return ReflectStep{0};
      if (ax == "y") return ReflectStep{1};
      if (ax == "z") return ReflectStep{2};
      throw ValueError("reflect 'axis' must be x, y or z");
    }
    return ReflectStep{static_cast<int>(require_number(j, "axis"))};
  }
  if (type == "noise") return NoiseStep{require_number(j, "stddev"), require_seed(j)};
  if (type == "dropout") {
    return DropoutStep{require_number(j, "probability"), require_seed(j)};
  }
  if (type == "interpolate") {
    const double fps = require_number(j, "fps");
    if (fps < 1 || fps > 0xFFFF) throw ValueError("interpolate fps must be in [1, 65535]");
    return InterpolateStep{static_cast<std::uint16_t>(fps)};
  }
  throw ValueError("unknown augmentation step type '" + type + "'");
}

} // namespace

AugmentationSpec parse_augmentation_spec(const nlohmann::json& j) {
  const nlohmann::json* steps = &j;
  if (j.is_object()) {
    if (!j.contains("steps")) throw ValueError("augmentation spec object needs a 'steps' array");
    steps = &j["steps"];
  }
  if (!steps->is_array()) throw ValueError("augmentation spec must be an array of steps");
  AugmentationSpec spec;
  spec.reserve(steps->size());
  for (const auto& item : *steps) spec.push_back(parse_step(item));
  validate_spec(spec);
  return spec;
}

} // namespace posekit
