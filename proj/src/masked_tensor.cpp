#include "posekit/masked_tensor.hpp"

#include <cmath>
#include <cstddef>

#include "posekit/error.hpp"
#include "posekit/kernels.hpp"

namespace posekit {

namespace {

void require_dims(int dims) {
  if (dims != 2 && dims != 3) {
    throw ValueError("dims must be 2 or 3, got " + std::to_string(dims));
  }
}

} // namespace

Affine Affine::identity(int dims) {
  require_dims(dims);
  Affine a;
  a.dims = dims;
  for (int i = 0; i < dims; ++i) a.at(i, i) = 1.0;
  return a;
}

Affine Affine::translation(std::span<const double> offset) {
  Affine a = identity(static_cast<int>(offset.size()));
  for (std::size_t i = 0; i < offset.size(); ++i) a.b[i] = offset[i];
  return a;
}

Affine Affine::scaling(std::span<const double> factors) {
  Affine a = identity(static_cast<int>(factors.size()));
  for (std::size_t i = 0; i < factors.size(); ++i) a.at(static_cast<int>(i), static_cast<int>(i)) = factors[i];
  return a;
}

Affine Affine::rotation(double angle, int dims) {
  Affine a = identity(dims);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  a.at(0, 0) = c;
  a.at(0, 1) = -s;
  a.at(1, 0) = s;
  a.at(1, 1) = c;
  return a;
}

Affine Affine::rotation_about_axis(std::array<double, 3> axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (n == 0.0) throw ValueError("rotation axis must be nonzero");
  const double ux = axis[0] / n, uy = axis[1] / n, uz = axis[2] / n;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double ic = 1.0 - c;
  Affine a;
  a.dims = 3;
  a.at(0, 0) = c + ux * ux * ic;
  a.at(0, 1) = ux * uy * ic - uz * s;
  a.at(0, 2) = ux * uz * ic + uy * s;
  a.at(1, 0) = uy * ux * ic + uz * s;
  a.at(1, 1) = c + uy * uy * ic;
  a.at(1, 2) = uy * uz * ic - ux * s;
  a.at(2, 0) = uz * ux * ic - uy * s;
  a.at(2, 1) = uz * uy * ic + ux * s;
  a.at(2, 2) = c + uz * uz * ic;
  return a;
}

Affine Affine::shear(double kx, double ky, int dims) {
  Affine a = identity(dims);
  a.at(0, 1) = kx;
  a.at(1, 0) = ky;
  return a;
}

Affine Affine::reflection(int axis, int dims) {
  Affine a = identity(dims);
  if (axis < 0 || axis >= dims) {
    throw ValueError("reflection axis " + std::to_string(axis) + " out of range for dims " +
                     std::to_string(dims));
  }
  a.at(axis, axis) = -1.0;
  return a;
}

Affine Affine::compose(const Affine& outer, const Affine& inner) {
  if (outer.dims != inner.dims) throw ValueError("affine dims mismatch in compose");
  Affine r;
  r.dims = outer.dims;
  const int d = outer.dims;
  for (int i = 0; i < d; ++i) {
    double acc = outer.b[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) {
      double cell = 0.0;
      for (int k = 0; k < d; ++k) cell += outer.at(i, k) * inner.at(k, j);
      r.at(i, j) = cell;
      acc += outer.at(i, j) * inner.b[static_cast<std::size_t>(j)];
    }
    r.b[static_cast<std::size_t>(i)] = acc;
  }
  return r;
}

MaskedTensor MaskedTensor::zeroed(std::size_t frames, std::size_t people,
                                  std::size_t points, int dims) {
  require_dims(dims);
  MaskedTensor t;
  t.frames = frames;
  t.people = people;
  t.points = points;
  t.dims = dims;
  t.data.assign(frames * people * points * static_cast<std::size_t>(dims), 0.0f);
  t.confidence.assign(frames * people * points, 0.0f);
  return t;
}

void MaskedTensor::canonicalize() {
  kernels::canonicalize(data.data(), confidence.data(), slots(), dims);
}

MaskedTensor apply_affine(const MaskedTensor& t, const Affine& a) {
  if (a.dims != t.dims) {
    throw ValueError("affine dims " + std::to_string(a.dims) + " do not match tensor dims " +
                     std::to_string(t.dims));
  }
  MaskedTensor out = t;
  kernels::affine_map(t.data.data(), t.confidence.data(), out.data.data(), t.slots(),
                      t.dims, a);
  return out;
}

std::optional<PointMean> unmasked_mean(const MaskedTensor& t, std::size_t point) {
  if (point >= t.points) {
    throw ValueError("point index " + std::to_string(point) + " out of range (points = " +
                     std::to_string(t.points) + ")");
  }
  PointMean r;
  std::array<double, 3> sum{};
  for (std::size_t f = 0; f < t.frames; ++f) {
    for (std::size_t p = 0; p < t.people; ++p) {
      if (t.conf(f, p, point) > 0.0f) {
        for (int d = 0; d < t.dims; ++d) sum[static_cast<std::size_t>(d)] += t.at(f, p, point, d);
        ++r.count;
      }
    }
  }
  if (r.count == 0) return std::nullopt;
  for (int d = 0; d < t.dims; ++d) {
    r.mean[static_cast<std::size_t>(d)] = sum[static_cast<std::size_t>(d)] / static_cast<double>(r.count);
  }
  return r;
}

MaskedTensor select_points(const MaskedTensor& t, std::span<const std::size_t> indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= t.points) {
      throw ValueError("point index " + std::to_string(indices[i]) + " out of range");
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw ValueError("point indices must be strictly increasing");
    }
  }
  MaskedTensor out = MaskedTensor::zeroed(t.frames, t.people, indices.size(), t.dims);
  const std::size_t d = static_cast<std::size_t>(t.dims);
  for (std::size_t f = 0; f < t.frames; ++f) {
    for (std::size_t p = 0; p < t.people; ++p) {
      for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t src = t.slot_index(f, p, indices[k]);
        const std::size_t dst = out.slot_index(f, p, k);
        out.confidence[dst] = t.confidence[src];
        for (std::size_t c = 0; c < d; ++c) out.data[dst * d + c] = t.data[src * d + c];
      }
    }
  }
  return out;
}

MaskedTensor add_noise(const MaskedTensor& t, double stddev, std::uint64_t seed) {
  if (stddev < 0.0) throw ValueError("noise stddev must be >= 0");
  MaskedTensor out = t;
  kernels::add_noise(out.data.data(), out.confidence.data(), out.slots(), out.dims,
                     stddev, seed);
  return out;
}

} // namespace posekit
