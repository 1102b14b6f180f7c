#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posekit/bench.hpp"
#include "posekit/codec.hpp"
#include "posekit/error.hpp"
#include "posekit/openpose.hpp"
#include "posekit/ops.hpp"
#include "posekit/render.hpp"

namespace {

posekit::PointRef parse_point_ref(const std::string& arg) {
  const auto colon = arg.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == arg.size()) {
    throw CLI::ValidationError("point name must look like COMPONENT:POINT, got '" + arg + "'");
  }
  return posekit::PointRef{arg.substr(0, colon), arg.substr(colon + 1)};
}

void cmd_info(const std::string& file) {
  const posekit::Pose pose = posekit::read_pose_file(file);
  const auto& h = pose.header;
  std::printf("version:    %.1f\n", static_cast<double>(h.version));
  std::printf("dims:       %d\n", h.dims());
  std::printf("canvas:     %ux%ux%u\n", h.width, h.height, h.depth);
  std::printf("components: %zu\n", h.components.size());
  for (const auto& c : h.components) {
    std::printf("  %-12s %3zu points, %3zu limbs, %3zu colors\n", c.name.c_str(),
                c.points.size(), c.limbs.size(), c.colors.size());
  }
  std::printf("points:     %zu\n", h.total_points());
  std::printf("frames:     %zu\n", pose.body.frames());
  std::printf("people:     %zu\n", pose.body.people());
  std::printf("fps:        %u\n", pose.body.fps);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for .pose keypoint sequence files"};
  app.require_subcommand(1);

  // info
  std::string info_file;
  CLI::App* info = app.add_subcommand("info", "Describe a .pose file");
  info->add_option("file", info_file, "input .pose file")->required();

  // convert
  std::string conv_from, conv_input, conv_out;
  unsigned conv_fps = 0, conv_width = 0, conv_height = 0;
  std::size_t conv_max_people = 1;
  CLI::App* convert = app.add_subcommand("convert", "Convert OpenPose JSON to .pose");
  convert->add_option("--from", conv_from, "source format (openpose)")->required();
  convert->add_option("--input", conv_input, "OpenPose JSON file or directory of per-frame files")
      ->required();
  convert->add_option("--fps", conv_fps, "frame rate")->required()->check(CLI::Range(1u, 65535u));
  convert->add_option("--width", conv_width, "source frame width")->required()
      ->check(CLI::Range(0u, 65535u));
  convert->add_option("--height", conv_height, "source frame height")->required()
      ->check(CLI::Range(0u, 65535u));
  convert->add_option("--max-people", conv_max_people, "people slots in the output");
  convert->add_option("--out", conv_out, "output .pose file")->required();

  // normalize
  std::string norm_left, norm_right, norm_in, norm_out;
  CLI::App* norm = app.add_subcommand("normalize", "Scale/center by two reference points");
  norm->add_option("--left", norm_left, "left point as COMPONENT:POINT")->required();
  norm->add_option("--right", norm_right, "right point as COMPONENT:POINT")->required();
  norm->add_option("--in", norm_in, "input .pose file")->required();
  norm->add_option("--out", norm_out, "output .pose file")->required();

  // augment
  std::string aug_spec, aug_in, aug_out;
  CLI::App* aug = app.add_subcommand("augment", "Apply an augmentation pipeline");
  aug->add_option("--spec", aug_spec, "JSON pipeline description")->required();
  aug->add_option("--in", aug_in, "input .pose file")->required();
  aug->add_option("--out", aug_out, "output .pose file")->required();

  // render
  std::string render_in, render_gif_path, render_frames_dir;
  double render_scale = 1.0;
  CLI::App* render = app.add_subcommand("render", "Rasterize to PNG frames or an animated GIF");
  render->add_option("--in", render_in, "input .pose file")->required();
  CLI::Option* ogif = render->add_option("--gif", render_gif_path, "output GIF path");
  CLI::Option* oframes = render->add_option("--frames", render_frames_dir, "output PNG directory");
  ogif->excludes(oframes);
  render->add_option("--scale", render_scale, "output pixels per pose unit");

  // bench
  std::vector<std::size_t> bench_frames{1, 10, 100, 1000, 10000};
  int bench_reps = 20;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Size/read-speed comparison vs OpenPose JSON");
  bench->add_option("--frames-list", bench_frames, "frame counts to benchmark")->delimiter(',');
  bench->add_option("--reps", bench_reps, "repetitions per measurement")->check(CLI::Range(1, 10000));
  bench->add_option("--out", bench_out, "write the report as JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info) {
      cmd_info(info_file);
    } else if (*convert) {
      if (conv_from != "openpose") {
        std::cerr << "unsupported --from '" << conv_from << "' (only openpose)\n";
        return 2;
      }
      posekit::Pose pose;
      if (std::filesystem::is_directory(conv_input)) {
        pose = posekit::parse_openpose_directory(conv_input, static_cast<std::uint16_t>(conv_fps),
                                                 static_cast<std::uint16_t>(conv_width),
                                                 static_cast<std::uint16_t>(conv_height),
                                                 conv_max_people);
      } else {
        pose = posekit::parse_openpose_file(conv_input, static_cast<std::uint16_t>(conv_fps),
                                            static_cast<std::uint16_t>(conv_width),
                                            static_cast<std::uint16_t>(conv_height),
                                            conv_max_people);
      }
      posekit::write_pose_file(conv_out, pose);
      std::printf("wrote %s (%zu frames, %zu people)\n", conv_out.c_str(), pose.body.frames(),
                  pose.body.people());
    } else if (*norm) {
      const posekit::NormalizationInfo ninfo{parse_point_ref(norm_left),
                                             parse_point_ref(norm_right)};
      const posekit::Pose pose = posekit::read_pose_file(norm_in);
      posekit::write_pose_file(norm_out, posekit::normalize(pose, ninfo));
      std::printf("wrote %s\n", norm_out.c_str());
    } else if (*aug) {
      std::ifstream spec_file(aug_spec);
      if (!spec_file) throw posekit::IoError("cannot open " + aug_spec);
      nlohmann::json spec_json;
      try {
        spec_json = nlohmann::json::parse(spec_file);
      } catch (const nlohmann::json::exception& e) {
        throw posekit::FormatError("malformed JSON in " + aug_spec + ": " + e.what());
      }
      const posekit::AugmentationSpec spec = posekit::parse_augmentation_spec(spec_json);
      const posekit::Pose pose = posekit::read_pose_file(aug_in);
      posekit::write_pose_file(aug_out, posekit::augment(pose, spec));
      std::printf("wrote %s\n", aug_out.c_str());
    } else if (*render) {
      if (render_gif_path.empty() && render_frames_dir.empty()) {
        std::cerr << "render needs --gif or --frames\n";
        return 2;
      }
      const posekit::Pose pose = posekit::read_pose_file(render_in);
      posekit::RenderOptions opts;
      opts.scale = render_scale;
      if (!render_gif_path.empty()) {
        posekit::render_gif(pose, render_gif_path, opts);
        std::printf("wrote %s (%zu frames)\n", render_gif_path.c_str(), pose.body.frames());
      } else {
        posekit::render_png_sequence(pose, render_frames_dir, opts);
        std::printf("wrote %zu frames to %s\n", pose.body.frames(), render_frames_dir.c_str());
      }
    } else if (*bench) {
      const posekit::BenchReport report = posekit::bench_run(bench_frames, bench_reps);
      std::fputs(posekit::bench_report_table(report).c_str(), stdout);
      if (!bench_out.empty()) {
        std::ofstream out(bench_out);
        if (!out) throw posekit::IoError("cannot open " + bench_out + " for writing");
        out << posekit::bench_report_json(report).dump(2) << "\n";
        std::printf("report written to %s\n", bench_out.c_str());
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const posekit::PoseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
