#ifndef SZOOM_PIPELINE_H_
#define SZOOM_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "szoom/fusion.h"
#include "szoom/geometry.h"
#include "szoom/observation.h"
#include "szoom/roi_select.h"
#include "szoom/tracking.h"
#include "szoom/zoom.h"

namespace szoom {

struct PipelineConfig {
  int omega = 4;
  // Per-kind override of omega.
  std::map<std::string, int> omega_per_kind;
  double delta_seconds = 5.0;
  // 0 means: take the rate from the input container, else 30.
  double fps = 0.0;
  double alpha = 0.3;
  FusionWeights weights = FusionWeights::defaults();
  double threshold = 0.2;
  int merge_dist = 16;
  // Analysis-grid pixels squared; negative means min_area_fraction * grid area.
  double min_area = -1.0;
  double min_area_fraction = 0.0005;
  double motion_scale = 0.6;
  // Downscale used by the external human detector; recorded, not applied here.
  double human_scale = 0.8;
  int out_w = 384;
  int out_h = 216;
  std::uint64_t seed = 0;
  double a_pct = 20.0;
  double b_pct = 30.0;
  int median_window = 5;
  double confidence_threshold = 0.5;
  MogParams mog;
  TrackerParams tracker;

  int omega_for(const std::string& kind) const;
  double effective_fps(std::optional<double> container_fps) const;
  int cycle_frames(std::optional<double> container_fps) const;
};

// Flat "key = value" text; '#' starts a comment. Unknown keys are rejected.
// Any weight.<kind> key replaces the default weight set with the given ones.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);

struct TrajectoryEntry {
  std::int64_t frame = 0;
  int cycle = 0;
  Phase phase = Phase::kFull;
  ZoomParams view;
  std::optional<Rect> target;

  friend bool operator==(const TrajectoryEntry&,
                         const TrajectoryEntry&) = default;
};

std::string format_trajectory_entry(const TrajectoryEntry& e);
std::vector<TrajectoryEntry> read_trajectory(std::istream& in);
std::vector<TrajectoryEntry> read_trajectory_file(
    const std::filesystem::path& path);

struct CycleSummary {
  int cycle = 0;
  std::int64_t first_frame = 0;
  int length = 0;
  bool partial = false;
  std::size_t candidates = 0;
  std::optional<Rect> selected;
};

struct StageTimings {
  double ingest_ms = 0.0;
  double motion_ms = 0.0;
  double detections_ms = 0.0;
  double decision_ms = 0.0;
  double tracking_ms = 0.0;
  double render_ms = 0.0;
  double write_ms = 0.0;
  std::int64_t motion_calls = 0;
  std::int64_t decision_calls = 0;
  std::int64_t tracking_calls = 0;
  std::int64_t frames = 0;
};

// Per-frame analysis engine. Frames are fed in order; each call returns the
// trajectory entry (view to render) for that frame. Each cycle of delta frames
// observes its first omega frames, selects a target on the last of them,
// tracks it for the rest of the cycle and penalizes its final position.
class ZoomEngine {
 public:
  ZoomEngine(PipelineConfig config, int frame_w, int frame_h,
             std::int64_t total_frames, std::optional<double> container_fps = {},
             DetectionIndex detections = {},
             std::optional<UserMask> user_mask = std::nullopt);

  TrajectoryEntry analyze(const Frame& frame);

  const PipelineConfig& config() const { return config_; }
  int cycle_frames() const { return cycle_len_; }
  int grid_width() const { return grid_w_; }
  int grid_height() const { return grid_h_; }
  double grid_scale() const { return grid_scale_; }
  const AbSchedule& schedule() const { return schedule_; }
  const ZoomParams& full() const { return full_; }
  const PenaltyState& penalty() const { return penalty_; }
  const std::vector<CycleSummary>& cycles() const { return cycles_; }
  const StageTimings& timings() const { return timings_; }
  // Decision map of the most recent selection (analysis grid).
  const ScalarMap& last_decision() const { return last_decision_; }

 private:
  void begin_cycle(std::int64_t frame_index);
  void observe(const Frame& frame);
  void select(const Frame& frame);

  PipelineConfig config_;
  int frame_w_;
  int frame_h_;
  std::int64_t total_frames_;
  int cycle_len_;
  int grid_w_;
  int grid_h_;
  double grid_scale_;
  AbSchedule schedule_;
  ZoomParams full_;
  DetectionIndex detections_;
  UserMask user_mask_;
  std::optional<MotionDetector> motion_;
  std::map<std::string, Accumulator> accumulators_;
  PenaltyState penalty_;
  CandidateParams candidate_params_;
  int select_at_ = 0;

  std::int64_t next_frame_ = 0;
  int cycle_ = -1;
  int frame_in_cycle_ = 0;
  bool partial_ = false;
  std::optional<TrackerState> tracker_;
  std::optional<Rect> tracked_;
  ZoomParams target_params_;
  ParamSmoother smoother_;
  ScalarMap last_decision_;
  std::vector<CycleSummary> cycles_;
  StageTimings timings_;
};

struct CycleOutput {
  std::vector<Frame> frames;
  std::vector<TrajectoryEntry> trajectory;
};

// Analyzes and renders one cycle's worth of frames (or a shorter tail).
CycleOutput run_cycle(ZoomEngine& engine, std::span<const Frame> frames);

struct RunOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> detections;
  std::optional<std::filesystem::path> mask;
  std::optional<std::filesystem::path> out_dir;
  std::filesystem::path trajectory;
  std::string image_format = "ppm";
  std::size_t queue_capacity = 8;
};

struct RunSummary {
  std::int64_t frames = 0;
  int cycle_frames = 0;
  std::vector<CycleSummary> cycles;
  StageTimings timings;
  std::uint64_t seed = 0;

  int targets_selected() const;
  std::string to_json() const;
};

// ingest -> analyze -> render -> write, each stage on its own thread joined by
// bounded queues. Frame order is preserved; the trajectory log is written by
// the analysis stage.
RunSummary run(const PipelineConfig& config, const RunOptions& options);

// Ground-truth object box per cycle, taken at the end of the hold phase.
struct CycleTruth {
  int cycle = 0;
  Rect box;
};
std::vector<CycleTruth> read_cycle_truth(std::istream& in);
std::vector<CycleTruth> read_cycle_truth_file(const std::filesystem::path& path);

// Fraction of zooming cycles whose truth box lies fully inside the view at the
// last hold frame. 1.0 when no cycle zoomed. Throws if a zooming cycle has no
// truth box.
double zoom_accuracy(const std::vector<TrajectoryEntry>& trajectory,
                     const std::vector<CycleTruth>& truth);

// Pixel PRF averaged over frames: matching mask files of two directories.
struct PrfReport {
  PrfScores mean;
  std::size_t frames = 0;
};
PrfReport evaluate_prf_dirs(const std::filesystem::path& pred_dir,
                            const std::filesystem::path& truth_dir);

}  // namespace szoom

#endif  // SZOOM_PIPELINE_H_
