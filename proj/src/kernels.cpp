#include "posekit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

namespace posekit::kernels {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  // Box-Muller on two counter-derived uniforms; no sequential state, so the
  // same (seed, index) yields the same deviate from any thread.
  const std::uint64_t base = splitmix64(seed) ^ splitmix64(index * 2 + 1);
  const std::uint64_t k1 = splitmix64(base);
  const std::uint64_t k2 = splitmix64(base + 0xD1B54A32D192ED03ull);
  const double u1 = 1.0 - static_cast<double>(k1 >> 11) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(k2 >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

inline void affine_slot(const float* x, float* y, int dims, const Affine& a) {
  double tmp[3];
  for (int r = 0; r < dims; ++r) {
    double acc = a.b[static_cast<std::size_t>(r)];
    for (int c = 0; c < dims; ++c) {
      acc += a.at(r, c) * static_cast<double>(x[c]);
    }
    tmp[r] = acc;
  }
  for (int r = 0; r < dims; ++r) {
    y[r] = static_cast<float>(tmp[r]);
  }
}

inline float clamp_conf(float c) {
  if (std::isnan(c)) return 0.0f;
  return std::min(1.0f, std::max(0.0f, c));
}

inline void noise_slot(float* x, std::size_t slot, int dims, double stddev,
                       std::uint64_t seed) {
  for (int d = 0; d < dims; ++d) {
    const std::uint64_t idx = slot * static_cast<std::uint64_t>(dims) + static_cast<std::uint64_t>(d);
    x[d] = static_cast<float>(static_cast<double>(x[d]) + stddev * gaussian_at(seed, idx));
  }
}

// All output frames of one (person, point) column. `valid` holds the frame
// indices where the column is unmasked, in order.
void resample_column(const float* in_data, const float* in_conf,
                     float* out_data, float* out_conf,
                     const std::vector<std::size_t>& valid,
                     std::size_t in_frames, std::size_t out_frames,
                     std::size_t frame_stride, int dims, double step) {
  const double t_max = static_cast<double>(in_frames - 1);
  std::size_t seg = 0;  // index into `valid`: current left support endpoint
  for (std::size_t j = 0; j < out_frames; ++j) {
    double t = static_cast<double>(j) * step;
    t = std::min(std::max(t, 0.0), t_max);

    // Confidence: plain lerp on the raw frame grid.
    const std::size_t f0 = static_cast<std::size_t>(t);
    const std::size_t f1 = std::min(f0 + 1, in_frames - 1);
    const double frac = t - static_cast<double>(f0);
    const double c0 = in_conf[f0 * frame_stride];
    const double c1 = in_conf[f1 * frame_stride];
    const double c = c0 + (c1 - c0) * frac;
    out_conf[j * frame_stride] = static_cast<float>(c);

    float* out = out_data + j * frame_stride * static_cast<std::size_t>(dims);
    if (valid.empty() || c <= 0.0) {
      for (int d = 0; d < dims; ++d) out[d] = 0.0f;
      continue;
    }

    // Coordinates: lerp over the unmasked support, held at the edges.
    while (seg + 1 < valid.size() && static_cast<double>(valid[seg + 1]) <= t) ++seg;
    const std::size_t v0 = valid[seg];
    const float* x0 = in_data + v0 * frame_stride * static_cast<std::size_t>(dims);
    if (t <= static_cast<double>(valid.front()) || seg + 1 >= valid.size()) {
      const std::size_t vh = t <= static_cast<double>(valid.front()) ? valid.front() : valid.back();
      const float* xh = in_data + vh * frame_stride * static_cast<std::size_t>(dims);
      for (int d = 0; d < dims; ++d) out[d] = xh[d];
      continue;
    }
    const std::size_t v1 = valid[seg + 1];
    const float* x1 = in_data + v1 * frame_stride * static_cast<std::size_t>(dims);
    const double u = (t - static_cast<double>(v0)) / static_cast<double>(v1 - v0);
    for (int d = 0; d < dims; ++d) {
      const double a = static_cast<double>(x0[d]);
      const double b = static_cast<double>(x1[d]);
      out[d] = static_cast<float>(a + (b - a) * u);
    }
  }
}

void resample_impl_column(const float* in_data, const float* in_conf,
                          float* out_data, float* out_conf,
                          std::size_t column, std::size_t in_frames,
                          std::size_t out_frames, std::size_t frame_stride,
                          int dims, double step) {
  std::vector<std::size_t> valid;
  valid.reserve(in_frames);
  for (std::size_t f = 0; f < in_frames; ++f) {
    if (in_conf[f * frame_stride + column] > 0.0f) valid.push_back(f);
  }
  resample_column(in_data + column * static_cast<std::size_t>(dims),
                  in_conf + column,
                  out_data + column * static_cast<std::size_t>(dims),
                  out_conf + column, valid, in_frames, out_frames, frame_stride,
                  dims, step);
}

} // namespace

namespace serial {

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a) {
  for (std::size_t s = 0; s < slots; ++s) {
    const std::size_t off = s * static_cast<std::size_t>(dims);
    if (conf[s] > 0.0f) {
      affine_slot(in + off, out + off, dims, a);
    } else {
      for (int d = 0; d < dims; ++d) out[off + static_cast<std::size_t>(d)] = 0.0f;
    }
  }
}

void canonicalize(float* data, float* conf, std::size_t slots, int dims) {
  for (std::size_t s = 0; s < slots; ++s) {
    conf[s] = clamp_conf(conf[s]);
    if (conf[s] == 0.0f) {
      for (int d = 0; d < dims; ++d) data[s * static_cast<std::size_t>(dims) + static_cast<std::size_t>(d)] = 0.0f;
    }
  }
}

void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed) {
  for (std::size_t s = 0; s < slots; ++s) {
    if (conf[s] > 0.0f) noise_slot(data + s * static_cast<std::size_t>(dims), s, dims, stddev, seed);
  }
}

void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step) {
  const std::size_t columns = people * points;
  for (std::size_t c = 0; c < columns; ++c) {
    resample_impl_column(in_data, in_conf, out_data, out_conf, c, in_frames,
                         out_frames, columns, dims, step);
  }
}

} // namespace serial

namespace omp {

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a) {
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(slots); ++s) {
    const std::size_t off = static_cast<std::size_t>(s) * static_cast<std::size_t>(dims);
    if (conf[s] > 0.0f) {
      affine_slot(in + off, out + off, dims, a);
    } else {
      for (int d = 0; d < dims; ++d) out[off + static_cast<std::size_t>(d)] = 0.0f;
    }
  }
}

void canonicalize(float* data, float* conf, std::size_t slots, int dims) {
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(slots); ++s) {
    conf[s] = clamp_conf(conf[s]);
    if (conf[s] == 0.0f) {
      for (int d = 0; d < dims; ++d) {
        data[static_cast<std::size_t>(s) * static_cast<std::size_t>(dims) + static_cast<std::size_t>(d)] = 0.0f;
      }
    }
  }
}

void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed) {
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(slots); ++s) {
    if (conf[s] > 0.0f) {
      noise_slot(data + static_cast<std::size_t>(s) * static_cast<std::size_t>(dims),
                 static_cast<std::size_t>(s), dims, stddev, seed);
    }
  }
}

void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step) {
  const std::size_t columns = people * points;
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(columns); ++c) {
    resample_impl_column(in_data, in_conf, out_data, out_conf,
                         static_cast<std::size_t>(c), in_frames, out_frames,
                         columns, dims, step);
  }
}

} // namespace omp

// Dispatch

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a) {
#ifdef _OPENMP
  if (slots >= kParallelThreshold) return omp::affine_map(in, conf, out, slots, dims, a);
#endif
  serial::affine_map(in, conf, out, slots, dims, a);
}

void canonicalize(float* data, float* conf, std::size_t slots, int dims) {
#ifdef _OPENMP
  if (slots >= kParallelThreshold) return omp::canonicalize(data, conf, slots, dims);
#endif
  serial::canonicalize(data, conf, slots, dims);
}

void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed) {
#ifdef _OPENMP
  if (slots >= kParallelThreshold) return omp::add_noise(data, conf, slots, dims, stddev, seed);
#endif
  serial::add_noise(data, conf, slots, dims, stddev, seed);
}

void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step) {
#ifdef _OPENMP
  if (people * points * std::max(in_frames, out_frames) >= kParallelThreshold) {
    return omp::resample(in_data, in_conf, out_data, out_conf, in_frames,
                         out_frames, people, points, dims, step);
  }
#endif
  serial::resample(in_data, in_conf, out_data, out_conf, in_frames, out_frames,
                   people, points, dims, step);
}

} // namespace posekit::kernels
