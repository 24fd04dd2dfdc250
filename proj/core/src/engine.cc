#include <chrono>

#include "szoom/pipeline.h"

namespace szoom {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void validate(const PipelineConfig& c) {
  if (c.omega < 1) throw Error("config: omega must be >= 1");
  for (const auto& [kind, w] : c.omega_per_kind) {
    if (w < 1) throw Error("config: omega." + kind + " must be >= 1");
  }
  if (!(c.delta_seconds > 0.0)) throw Error("config: delta_seconds must be > 0");
  if (c.fps < 0.0) throw Error("config: fps must be >= 0");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw Error("config: alpha must lie in [0, 1]");
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) {
    throw Error("config: threshold must lie in (0, 1)");
  }
  if (c.merge_dist < 0) throw Error("config: merge_dist must be >= 0");
  if (!(c.motion_scale > 0.0 && c.motion_scale <= 1.0)) {
    throw Error("config: motion_scale must lie in (0, 1]");
  }
  if (!(c.human_scale > 0.0 && c.human_scale <= 1.0)) {
    throw Error("config: human_scale must lie in (0, 1]");
  }
  if (c.out_w < 1 || c.out_h < 1) throw Error("config: out_w and out_h must be >= 1");
  if (c.median_window < 1) throw Error("config: median_window must be >= 1");
  if (!(c.confidence_threshold >= 0.0 && c.confidence_threshold <= 1.0)) {
    throw Error("config: confidence_threshold must lie in [0, 1]");
  }
}

}  // namespace

ZoomEngine::ZoomEngine(PipelineConfig config, int frame_w, int frame_h,
                       std::int64_t total_frames,
                       std::optional<double> container_fps,
                       DetectionIndex detections,
                       std::optional<UserMask> user_mask)
    : config_(std::move(config)),
      frame_w_(frame_w),
      frame_h_(frame_h),
      total_frames_(total_frames),
      cycle_len_((validate(config_), config_.cycle_frames(container_fps))),
      grid_w_(grid_extent(frame_w, config_.motion_scale)),
      grid_h_(grid_extent(frame_h, config_.motion_scale)),
      grid_scale_(config_.motion_scale),
      schedule_(std::max(cycle_len_, 1), config_.a_pct, config_.b_pct),
      full_(full_view(frame_w, frame_h, config_.out_w, config_.out_h)),
      detections_(std::move(detections)),
      penalty_(grid_w_, grid_h_, config_.alpha),
      smoother_(config_.median_window) {
  if (frame_w < 1 || frame_h < 1) throw Error("ZoomEngine: bad frame size");
  if (cycle_len_ < 1) throw Error("config: cycle length rounds to zero frames");

  const auto kinds = config_.weights.kinds();
  int omega_total = 0;
  for (const auto& kind : kinds) {
    const int omega = config_.omega_for(kind);
    omega_total += omega;
    if (omega > schedule_.lengths()[0]) {
      throw Error("config: omega for '" + kind + "' (" + std::to_string(omega) +
                  ") exceeds the full-view phase of " +
                  std::to_string(schedule_.lengths()[0]) +
                  " frames; the target must be chosen before zooming starts");
    }
    accumulators_.emplace(kind, Accumulator(kind, omega));
    select_at_ = std::max(select_at_, omega - 1);
  }
  if (omega_total > cycle_len_) {
    throw Error("config: omega summed over observation kinds (" +
                std::to_string(omega_total) + ") exceeds the cycle length (" +
                std::to_string(cycle_len_) + " frames)");
  }
  for (const auto& kind : detections_.kinds()) {
    if (kind == kMotion) {
      throw Error("detection stream: 'motion' is produced internally and may "
                  "not appear in the stream");
    }
    if (!config_.weights.has(kind)) {
      throw Error("detection stream: no fusion weight for kind '" + kind + "'");
    }
  }
  if (config_.weights.has(kMotion)) {
    motion_.emplace(frame_w, frame_h, config_.motion_scale, config_.mog);
  }

  if (user_mask) {
    const ScalarMap& m = user_mask->map();
    const bool full_size = m.width() == frame_w && m.height() == frame_h;
    const bool grid_size = m.width() == grid_w_ && m.height() == grid_h_;
    if (!full_size && !grid_size) {
      throw Error("user mask is " + std::to_string(m.width()) + "x" +
                  std::to_string(m.height()) + " but frames are " +
                  std::to_string(frame_w) + "x" + std::to_string(frame_h) +
                  " (analysis grid " + std::to_string(grid_w_) + "x" +
                  std::to_string(grid_h_) + ")");
    }
    user_mask_ = user_mask->resized(grid_w_, grid_h_);
  } else {
    user_mask_ = UserMask::all_relevant(grid_w_, grid_h_);
  }

  candidate_params_.threshold = config_.threshold;
  candidate_params_.merge_dist = config_.merge_dist;
  candidate_params_.min_area =
      config_.min_area >= 0.0
          ? config_.min_area
          : config_.min_area_fraction * static_cast<double>(grid_w_) * grid_h_;
}

void ZoomEngine::begin_cycle(std::int64_t frame_index) {
  ++cycle_;
  frame_in_cycle_ = 0;
  const std::int64_t remaining = total_frames_ - frame_index;
  partial_ = remaining < cycle_len_;
  for (auto& [kind, acc] : accumulators_) acc.reset();
  tracker_.reset();
  tracked_.reset();
  smoother_.reset();
  CycleSummary summary;
  summary.cycle = cycle_;
  summary.first_frame = frame_index;
  summary.length = partial_ ? static_cast<int>(remaining) : cycle_len_;
  summary.partial = partial_;
  cycles_.push_back(summary);
}

void ZoomEngine::observe(const Frame& frame) {
  for (auto& [kind, acc] : accumulators_) {
    if (frame_in_cycle_ >= acc.omega()) {
      if (kind == kMotion) {
        const auto start = Clock::now();
        motion_->learn(frame);
        timings_.motion_ms += ms_since(start);
        ++timings_.motion_calls;
      }
      continue;
    }
    if (kind == kMotion) {
      const auto start = Clock::now();
      const auto rects = motion_->detect_grid(frame);
      acc.push(rasterize_rects(rects, grid_w_, grid_h_));
      timings_.motion_ms += ms_since(start);
      ++timings_.motion_calls;
    } else {
      const auto start = Clock::now();
      std::vector<Rect> rects;
      for (const auto& rec : detections_.find(next_frame_, kind)) {
        if (rec.confidence < config_.confidence_threshold) continue;
        rects.push_back(scale_rect(rec.rect, grid_scale_));
      }
      acc.push(rasterize_rects(rects, grid_w_, grid_h_));
      timings_.detections_ms += ms_since(start);
    }
  }
}

void ZoomEngine::select(const Frame& frame) {
  const auto start = Clock::now();
  std::map<std::string, ScalarMap> observations;
  for (const auto& [kind, acc] : accumulators_) {
    ScalarMap obs = acc.current();
    if (obs.empty()) obs = ScalarMap(grid_w_, grid_h_);
    observations.emplace(kind, std::move(obs));
  }
  const ScalarMap sensitivity = fuse(observations, config_.weights);
  last_decision_ = decision_map(sensitivity, user_mask_, penalty_);
  auto candidates = extract_candidates(last_decision_, candidate_params_);
  cycles_.back().candidates = candidates.size();
  for (auto& c : candidates) {
    c.rect = clamp_rect(scale_rect(c.rect, 1.0 / grid_scale_), frame_w_, frame_h_);
  }
  const auto target =
      select_target(candidates, static_cast<double>(config_.out_w) / config_.out_h,
                    frame_w_, frame_h_);
  timings_.decision_ms += ms_since(start);
  ++timings_.decision_calls;
  if (!target || target->w < 2 || target->h < 2) return;

  tracker_ = init_tracker(frame, *target, config_.tracker);
  tracked_ = *target;
  target_params_ = smoother_.push(params_from_rect(*target));
  cycles_.back().selected = *target;
}

TrajectoryEntry ZoomEngine::analyze(const Frame& frame) {
  if (frame.width() != frame_w_ || frame.height() != frame_h_) {
    throw Error("frame " + std::to_string(frame.index()) + " is " +
                std::to_string(frame.width()) + "x" +
                std::to_string(frame.height()) + ", expected " +
                std::to_string(frame_w_) + "x" + std::to_string(frame_h_));
  }
  if (next_frame_ >= total_frames_) {
    throw Error("ZoomEngine: more frames than announced (" +
                std::to_string(total_frames_) + ")");
  }
  if (cycle_ < 0 || frame_in_cycle_ >= cycle_len_) begin_cycle(next_frame_);

  const int k = frame_in_cycle_;
  if (!partial_) {
    observe(frame);
    if (k == select_at_) {
      select(frame);
    } else if (k > select_at_ && tracker_) {
      const auto start = Clock::now();
      tracked_ = track_step(*tracker_, frame);
      target_params_ = refine_target(target_params_, *tracked_, smoother_);
      timings_.tracking_ms += ms_since(start);
      ++timings_.tracking_calls;
    }
  }

  TrajectoryEntry entry;
  entry.frame = next_frame_;
  entry.cycle = cycle_;
  entry.target = tracked_;
  if (tracker_) {
    entry.phase = schedule_.phase_of(k);
    entry.view = clamp_view(schedule_params(schedule_, k, full_, target_params_),
                            frame_w_, frame_h_);
  } else {
    entry.phase = Phase::kFull;
    entry.view = full_;
  }
  if (partial_ && motion_) motion_->learn(frame);

  if (!partial_ && k == cycle_len_ - 1 && tracked_) {
    const Rect on_grid =
        clamp_rect(scale_rect(*tracked_, grid_scale_), grid_w_, grid_h_);
    if (on_grid.w > 0 && on_grid.h > 0) {
      penalty_ = apply_penalty_cycle(std::move(penalty_), on_grid);
    }
  }

  ++timings_.frames;
  ++next_frame_;
  ++frame_in_cycle_;
  return entry;
}

CycleOutput run_cycle(ZoomEngine& engine, std::span<const Frame> frames) {
  CycleOutput out;
  out.frames.reserve(frames.size());
  out.trajectory.reserve(frames.size());
  const auto& c = engine.config();
  for (const Frame& f : frames) {
    TrajectoryEntry e = engine.analyze(f);
    Frame rendered = render(f, e.view, c.out_w, c.out_h);
    out.frames.push_back(std::move(rendered));
    out.trajectory.push_back(std::move(e));
  }
  return out;
}

}  // namespace szoom
