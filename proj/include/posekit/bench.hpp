#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "posekit/masked_tensor.hpp"

namespace posekit {

/// One benchmark row: a synthetic 137-point, 1-person, 2D sequence serialized
/// both ways, timed from in-memory buffers. Times are medians over the run's
/// repetition count; ratios are json / pose.
struct BenchRow {
  std::size_t frames = 0;
  std::size_t json_bytes = 0;
  std::size_t pose_bytes = 0;
  double json_parse_s = 0;
  double pose_read_s = 0;
  double pose_body_read_s = 0;
  double size_ratio = 0;
  double speed_ratio = 0;
};

struct BenchReport {
  int reps = 20;
  std::vector<BenchRow> rows;
};

/// Deterministic synthetic inputs (fixed seed); timing is single-threaded.
/// json_parse_s times the JSON DOM parse alone (no tensor build); pose_read_s
/// a full read; pose_body_read_s the tensor decode with the header skipped at
/// its known length.
BenchReport bench_run(const std::vector<std::size_t>& frames_list, int reps = 20);

/// OpenPose-shaped monolithic JSON for the given synthetic tensor; floats are
/// printed with 6 significant digits.
std::string synth_openpose_json(const MaskedTensor& tensor);

nlohmann::json bench_report_json(const BenchReport& report);
std::string bench_report_table(const BenchReport& report);

} // namespace posekit
