#include "posekit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <span>

#include "posekit/codec.hpp"
#include "posekit/openpose.hpp"

namespace posekit {

namespace {

constexpr std::uint64_t kSynthSeed = 0x9E24C0DEull;

template <class T>
inline void do_not_optimize(const T& value) {
  asm volatile("" : : "g"(&value) : "memory");
}

/// Headline comparison shape: 137 points, one person, 2D.
Pose synth_pose(std::size_t frames) {
  Pose pose;
  pose.header = openpose_header(137, 1000, 1000);
  pose.body.fps = 30;

  MaskedTensor t = MaskedTensor::zeroed(frames, 1, 137, 2);
  std::mt19937_64 rng(kSynthSeed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (std::size_t i = 0; i < t.slots(); ++i) {
    t.data[i * 2] = static_cast<float>(1.0 + uniform() * 998.0);
    t.data[i * 2 + 1] = static_cast<float>(1.0 + uniform() * 998.0);
    t.confidence[i] = static_cast<float>(0.05 + uniform() * 0.95);
  }
  pose.body.tensor = std::move(t);
  return pose;
}

void append_triples(std::string& out, const MaskedTensor& t, std::size_t frame,
                    std::size_t first, std::size_t count) {
  char buf[64];
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t point = first + k;
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g", t.at(frame, 0, point, 0),
                  t.at(frame, 0, point, 1), t.conf(frame, 0, point));
    if (k) out.push_back(',');
    out.append(buf);
  }
}

double median_seconds(int reps, const std::function<void()>& fn) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  const double med = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
  return std::max(med, 1e-9);
}

std::string format_bytes(std::size_t bytes) {
  char buf[32];
  if (bytes < 1000) {
    std::snprintf(buf, sizeof(buf), "%zu B", bytes);
  } else if (bytes < 1000 * 1000) {
    std::snprintf(buf, sizeof(buf), "%.1f KB", static_cast<double>(bytes) / 1e3);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f MB", static_cast<double>(bytes) / 1e6);
  }
  return buf;
}

std::string format_seconds(double s) {
  char buf[32];
  if (s < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.1f us", s * 1e6);
  } else if (s < 1.0) {
    std::snprintf(buf, sizeof(buf), "%.2f ms", s * 1e3);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f s", s);
  }
  return buf;
}

} // namespace

std::string synth_openpose_json(const MaskedTensor& t) {
  std::string out;
  out.reserve(t.frames * 3700 + 16);
  out.push_back('[');
  for (std::size_t f = 0; f < t.frames; ++f) {
    if (f) out.push_back(',');
    out.append("{\"people\":[{\"person_id\":[-1],\"pose_keypoints_2d\":[");
    append_triples(out, t, f, 0, 25);
    out.append("],\"face_keypoints_2d\":[");
    append_triples(out, t, f, 25, 70);
    out.append("],\"hand_left_keypoints_2d\":[");
    append_triples(out, t, f, 95, 21);
    out.append("],\"hand_right_keypoints_2d\":[");
    append_triples(out, t, f, 116, 21);
    out.append("]}]}");
  }
  out.push_back(']');
  return out;
}

BenchReport bench_run(const std::vector<std::size_t>& frames_list, int reps) {
  if (reps < 1) reps = 1;
  BenchReport report;
  report.reps = reps;
  for (const std::size_t frames : frames_list) {
    const Pose pose = synth_pose(std::max<std::size_t>(frames, 1));
    const std::vector<std::uint8_t> pose_bytes = write_pose(pose);
    const std::string json_text = synth_openpose_json(pose.body.tensor);
    const std::size_t header_len = header_size(pose.header);
    const std::span<const std::uint8_t> bytes(pose_bytes);

    BenchRow row;
    row.frames = pose.body.frames();
    row.pose_bytes = pose_bytes.size();
    row.json_bytes = json_text.size();

    // DOM parse only; building a tensor from it is deliberately not timed.
    row.json_parse_s = median_seconds(reps, [&] {
      const nlohmann::json doc = nlohmann::json::parse(json_text);
      do_not_optimize(doc);
    });
    row.pose_read_s = median_seconds(reps, [&] {
      const Pose p = read_pose(bytes);
      do_not_optimize(p.body.tensor.data);
    });
    row.pose_body_read_s = median_seconds(reps, [&] {
      const Body b = decode_body(bytes.subspan(header_len), pose.header);
      do_not_optimize(b.tensor.data);
    });

    row.size_ratio = static_cast<double>(row.json_bytes) / static_cast<double>(row.pose_bytes);
    row.speed_ratio = row.json_parse_s / row.pose_read_s;
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json bench_report_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"frames", r.frames},
                    {"json_bytes", r.json_bytes},
                    {"pose_bytes", r.pose_bytes},
                    {"json_parse_s", r.json_parse_s},
                    {"pose_read_s", r.pose_read_s},
                    {"pose_body_read_s", r.pose_body_read_s},
                    {"size_ratio", r.size_ratio},
                    {"speed_ratio", r.speed_ratio}});
  }
  return {{"reps", report.reps}, {"rows", rows}};
}

std::string bench_report_table(const BenchReport& report) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%8s  %10s %12s  %10s %12s %12s  %7s %8s\n", "Frames",
                "JSON Size", "JSON Parse", "Pose Size", "Pose Read", "Body Read", "Size x",
                "Speed x");
  out.append(line);
  out.append(std::string(out.size() - 1, '-'));
  out.push_back('\n');
  for (const BenchRow& r : report.rows) {
    std::snprintf(line, sizeof(line), "%8zu  %10s %12s  %10s %12s %12s  %7.2f %8.1f\n",
                  r.frames, format_bytes(r.json_bytes).c_str(),
                  format_seconds(r.json_parse_s).c_str(), format_bytes(r.pose_bytes).c_str(),
                  format_seconds(r.pose_read_s).c_str(),
                  format_seconds(r.pose_body_read_s).c_str(), r.size_ratio, r.speed_ratio);
    out.append(line);
  }
  return out;
}

} // namespace posekit
