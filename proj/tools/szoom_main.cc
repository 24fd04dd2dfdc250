// szoom: select, track and zoom into the active region of a frame stream.
//
//   szoom run --input <dir|stream> [--detections f] [--mask f] [--config f]
//             [--out dir] --trajectory f [--seed N] [--format ppm|png]
//   szoom eval prf --pred <dir> --truth <dir>
//   szoom eval accuracy --trajectory <file> --truth <file>
//   szoom synth --out <dir|file.szraw> [--frames N] ...

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "szoom/image_io.h"
#include "szoom/pipeline.h"
#include "szoom/synthetic.h"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string input;
  std::string detections;
  std::string mask;
  std::string config;
  std::string out;
  std::string trajectory;
  std::int64_t seed = -1;
  std::string format = "ppm";
  bool print_config = false;
};

int do_run(const RunArgs& a) {
  szoom::PipelineConfig config;
  if (!a.config.empty()) config = szoom::load_config(a.config);
  if (a.seed >= 0) config.seed = static_cast<std::uint64_t>(a.seed);
  if (a.print_config) std::cerr << szoom::format_config(config);

  szoom::RunOptions opts;
  opts.input = a.input;
  if (!a.detections.empty()) opts.detections = a.detections;
  if (!a.mask.empty()) opts.mask = a.mask;
  if (!a.out.empty()) opts.out_dir = a.out;
  opts.trajectory = a.trajectory;
  opts.image_format = a.format;

  const szoom::RunSummary s = szoom::run(config, opts);
  std::printf("frames %lld  cycles %zu (%d frames each)  targets %d\n",
              static_cast<long long>(s.frames), s.cycles.size(), s.cycle_frames,
              s.targets_selected());
  return 0;
}

struct SynthArgs {
  std::string out;
  int frames = 300;
  int width = 640;
  int height = 360;
  int movers = 1;
  int noise = 2;
  std::uint64_t seed = 1;
  double fps = 30.0;
  std::string truth;
};

int do_synth(const SynthArgs& a) {
  szoom::SyntheticScene scene;
  scene.width = a.width;
  scene.height = a.height;
  scene.noise = a.noise;
  scene.seed = a.seed;
  const int side = std::max(8, std::min(a.width, a.height) / 8);
  for (int i = 0; i < a.movers; ++i) {
    szoom::Mover m;
    m.start = {a.width / 8 + i * a.width / (a.movers + 1), a.height / 3, side,
               side * 3 / 2};
    m.vx = i % 2 == 0 ? 2.0 : -1.5;
    m.vy = i % 2 == 0 ? 0.5 : 1.0;
    m.color = {static_cast<std::uint8_t>(220 - 60 * (i % 3)),
               static_cast<std::uint8_t>(40 + 70 * (i % 3)), 40};
    scene.movers.push_back(m);
  }

  const fs::path out(a.out);
  const bool raw = out.extension() == ".szraw";
  std::optional<szoom::RawStreamWriter> writer;
  if (raw) {
    writer.emplace(out, a.width, a.height, a.fps);
  } else {
    fs::create_directories(out);
  }
  for (int t = 0; t < a.frames; ++t) {
    const szoom::Frame f = szoom::render_scene(scene, t);
    if (raw) {
      writer->write(f);
    } else {
      char name[32];
      std::snprintf(name, sizeof(name), "%06d.ppm", t);
      szoom::write_image(out / name, f);
    }
  }
  if (!a.truth.empty()) {
    fs::create_directories(a.truth);
    for (int t = 0; t < a.frames; ++t) {
      char name[32];
      std::snprintf(name, sizeof(name), "%06d.pgm", t);
      szoom::write_binary_mask(fs::path(a.truth) / name,
                               szoom::scene_truth(scene, t));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-of-interest zoom for surveillance frame streams"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Analyze a frame stream and render the zoomed output");
  run->add_option("--input", run_args.input, "Directory of numbered images or .szraw stream")
      ->required();
  run->add_option("--detections", run_args.detections, "Detection stream (JSON Lines)");
  run->add_option("--mask", run_args.mask, "User relevance mask image");
  run->add_option("--config", run_args.config, "key = value configuration file");
  run->add_option("--out", run_args.out, "Output directory for frames and summary.json");
  run->add_option("--trajectory", run_args.trajectory, "Trajectory log to write (JSON Lines)")
      ->required();
  run->add_option("--seed", run_args.seed, "Override the configured seed");
  run->add_option("--format", run_args.format, "Output image format")
      ->check(CLI::IsMember({"ppm", "png"}));
  run->add_flag("--print-config", run_args.print_config,
                "Print the effective configuration to stderr");

  auto* eval = app.add_subcommand("eval", "Evaluation reports");
  eval->require_subcommand(1);
  std::string pred_dir, truth_dir;
  auto* prf = eval->add_subcommand("prf", "Pixel precision/recall/F1 of mask directories");
  prf->add_option("--pred", pred_dir)->required();
  prf->add_option("--truth", truth_dir)->required();
  std::string traj_file, truth_file;
  auto* acc = eval->add_subcommand("accuracy", "Zoom accuracy of a trajectory log");
  acc->add_option("--trajectory", traj_file)->required();
  acc->add_option("--truth", truth_file, "Per-cycle truth boxes (JSON Lines)")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write a synthetic test scene");
  synth->add_option("--out", synth_args.out, "Directory, or a file ending in .szraw")
      ->required();
  synth->add_option("--frames", synth_args.frames)->check(CLI::PositiveNumber);
  synth->add_option("--width", synth_args.width)->check(CLI::Range(16, 8192));
  synth->add_option("--height", synth_args.height)->check(CLI::Range(16, 8192));
  synth->add_option("--movers", synth_args.movers)->check(CLI::Range(0, 16));
  synth->add_option("--noise", synth_args.noise)->check(CLI::Range(0, 64));
  synth->add_option("--seed", synth_args.seed);
  synth->add_option("--fps", synth_args.fps)->check(CLI::PositiveNumber);
  synth->add_option("--truth", synth_args.truth, "Also write per-frame truth masks here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return do_run(run_args);
    if (*prf) {
      const auto r = szoom::evaluate_prf_dirs(pred_dir, truth_dir);
      std::printf("frames %zu  precision %.4f  recall %.4f  f1 %.4f\n", r.frames,
                  r.mean.precision, r.mean.recall, r.mean.f1);
      return 0;
    }
    if (*acc) {
      const auto traj = szoom::read_trajectory_file(traj_file);
      const auto truth = szoom::read_cycle_truth_file(truth_file);
      std::printf("accuracy %.4f\n", szoom::zoom_accuracy(traj, truth));
      return 0;
    }
    if (*synth) return do_synth(synth_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "szoom: %s\n", e.what());
    return 1;
  }
  return 0;
}
