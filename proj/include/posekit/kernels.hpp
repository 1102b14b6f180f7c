#pragma once

#include <cstddef>
#include <cstdint>

#include "posekit/masked_tensor.hpp"

// Data-parallel inner loops of the library. Each kernel exists twice: a plain
// serial loop kept as the reference, and an OpenMP variant. Both compute the
// same per-slot arithmetic, so outputs are bitwise identical; tests assert
// that and tools/kernel_bench.cpp times the two side by side.
namespace posekit::kernels {

// Per-slot arithmetic is done in double and rounded to float once on store.

namespace serial {

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a);

/// Clamp conf into [0,1] (NaN -> 0), zero coordinates where conf == 0.
void canonicalize(float* data, float* conf, std::size_t slots, int dims);

void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed);

/// Linear time-resampling of every (person, point) column.
/// Output frame j samples source time t_j = j*step, clamped to [0, in_frames-1].
/// Coordinates interpolate over the column's unmasked support (held at the
/// edges); confidence interpolates over the raw per-frame signal; slots whose
/// resampled confidence is 0 come out canonically masked.
void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step);

} // namespace serial

namespace omp {

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a);
void canonicalize(float* data, float* conf, std::size_t slots, int dims);
void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed);
void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step);

} // namespace omp

// Dispatched entry points: OpenMP above kParallelThreshold work items when
// compiled with it, serial otherwise. Results do not depend on the route.
inline constexpr std::size_t kParallelThreshold = 1u << 14;

void affine_map(const float* in, const float* conf, float* out,
                std::size_t slots, int dims, const Affine& a);
void canonicalize(float* data, float* conf, std::size_t slots, int dims);
void add_noise(float* data, const float* conf, std::size_t slots, int dims,
               double stddev, std::uint64_t seed);
void resample(const float* in_data, const float* in_conf,
              float* out_data, float* out_conf,
              std::size_t in_frames, std::size_t out_frames,
              std::size_t people, std::size_t points, int dims, double step);

/// SplitMix64 bit mixer; the per-coordinate noise generator keys off it.
std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal deviate derived from (seed, index) only.
double gaussian_at(std::uint64_t seed, std::uint64_t index);

} // namespace posekit::kernels
