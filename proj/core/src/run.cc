#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "szoom/bounded_queue.h"
#include "szoom/image_io.h"
#include "szoom/pipeline.h"

namespace szoom {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Analyzed {
  Frame frame;
  ZoomParams view;
};

// First exception raised by any stage; raising it closes every queue so the
// other stages unwind.
class Failure {
 public:
  template <typename... Queues>
  void record(Queues&... queues) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
    (queues.close(), ...);
  }
  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

double mean(double total, std::int64_t n) {
  return n > 0 ? total / static_cast<double>(n) : 0.0;
}

}  // namespace

int RunSummary::targets_selected() const {
  int n = 0;
  for (const auto& c : cycles) n += c.selected ? 1 : 0;
  return n;
}

std::string RunSummary::to_json() const {
  nlohmann::ordered_json j;
  j["frames"] = frames;
  j["cycle_frames"] = cycle_frames;
  j["cycles"] = cycles.size();
  j["targets_selected"] = targets_selected();
  j["seed"] = seed;
  const auto& t = timings;
  j["mean_ms"] = {
      {"ingest", mean(t.ingest_ms, t.frames)},
      {"motion", mean(t.motion_ms, t.motion_calls)},
      {"detections", mean(t.detections_ms, t.decision_calls)},
      {"decision", mean(t.decision_ms, t.decision_calls)},
      {"tracking", mean(t.tracking_ms, t.tracking_calls)},
      {"render", mean(t.render_ms, t.frames)},
      {"write", mean(t.write_ms, t.frames)},
  };
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : cycles) {
    nlohmann::ordered_json e;
    e["cycle"] = c.cycle;
    e["first_frame"] = c.first_frame;
    e["length"] = c.length;
    e["partial"] = c.partial;
    e["candidates"] = c.candidates;
    if (c.selected) {
      e["selected"] = {{"x", c.selected->x}, {"y", c.selected->y},
                       {"w", c.selected->w}, {"h", c.selected->h}};
    } else {
      e["selected"] = nullptr;
    }
    list.push_back(std::move(e));
  }
  j["cycle_log"] = std::move(list);
  return j.dump(2);
}

RunSummary run(const PipelineConfig& config, const RunOptions& options) {
  auto source = open_frame_source(options.input);
  const int w = source->width();
  const int h = source->height();
  const std::int64_t total = source->frame_count();
  if (total < 1) throw Error("input '" + options.input.string() + "' has no frames");

  DetectionIndex detections;
  if (options.detections) {
    detections = read_detection_file(options.detections->string(), w, h);
  }
  std::optional<UserMask> mask;
  if (options.mask) mask = UserMask(read_binary_mask(*options.mask));

  ZoomEngine engine(config, w, h, total, source->fps(), std::move(detections),
                    std::move(mask));

  std::ofstream trajectory(options.trajectory, std::ios::binary);
  if (!trajectory) {
    throw Error("cannot write trajectory '" + options.trajectory.string() + "'");
  }
  const bool render_frames = options.out_dir.has_value();
  if (render_frames) std::filesystem::create_directories(*options.out_dir);
  if (options.image_format != "ppm" && options.image_format != "png") {
    throw Error("unsupported output format '" + options.image_format + "'");
  }

  BoundedQueue<Frame> ingested(options.queue_capacity);
  BoundedQueue<Analyzed> analyzed(options.queue_capacity);
  BoundedQueue<Frame> rendered(options.queue_capacity);
  Failure failure;
  double ingest_ms = 0.0;
  double render_ms = 0.0;
  double write_ms = 0.0;
  std::int64_t written = 0;

  std::thread ingest([&] {
    try {
      for (;;) {
        const auto start = Clock::now();
        auto frame = source->next();
        ingest_ms += ms_since(start);
        if (!frame) break;
        if (!ingested.push(std::move(*frame))) return;
      }
      ingested.close();
    } catch (...) {
      failure.record(ingested, analyzed, rendered);
    }
  });

  std::thread analyze([&] {
    try {
      while (auto frame = ingested.pop()) {
        const TrajectoryEntry e = engine.analyze(*frame);
        trajectory << format_trajectory_entry(e) << '\n';
        if (!analyzed.push({std::move(*frame), e.view})) return;
      }
      trajectory.flush();
      if (!trajectory) throw Error("write to trajectory log failed");
      analyzed.close();
    } catch (...) {
      failure.record(ingested, analyzed, rendered);
    }
  });

  std::thread render_stage([&] {
    try {
      while (auto item = analyzed.pop()) {
        if (!render_frames) {
          if (!rendered.push(Frame(1, 1, item->frame.index()))) return;
          continue;
        }
        const auto start = Clock::now();
        Frame out = render(item->frame, item->view, config.out_w, config.out_h);
        render_ms += ms_since(start);
        if (!rendered.push(std::move(out))) return;
      }
      rendered.close();
    } catch (...) {
      failure.record(ingested, analyzed, rendered);
    }
  });

  try {
    while (auto frame = rendered.pop()) {
      if (render_frames) {
        const auto start = Clock::now();
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%06lld.%s",
                      static_cast<long long>(frame->index()),
                      options.image_format.c_str());
        write_image(*options.out_dir / name, *frame);
        write_ms += ms_since(start);
      }
      ++written;
    }
  } catch (...) {
    failure.record(ingested, analyzed, rendered);
  }

  ingest.join();
  analyze.join();
  render_stage.join();
  failure.rethrow();
  if (written != total) {
    throw Error("pipeline produced " + std::to_string(written) + " frames for " +
                std::to_string(total) + " inputs");
  }

  RunSummary summary;
  summary.frames = written;
  summary.cycle_frames = engine.cycle_frames();
  summary.cycles = engine.cycles();
  summary.timings = engine.timings();
  summary.timings.ingest_ms = ingest_ms;
  summary.timings.render_ms = render_ms;
  summary.timings.write_ms = write_ms;
  summary.seed = config.seed;

  if (render_frames) {
    std::ofstream out(*options.out_dir / "summary.json");
    out << summary.to_json() << '\n';
    if (!out) throw Error("cannot write summary.json");
  }
  return summary;
}

}  // namespace szoom
