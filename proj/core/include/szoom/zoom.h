#ifndef SZOOM_ZOOM_H_
#define SZOOM_ZOOM_H_

#include <array>
#include <deque>
#include <string>

#include "szoom/geometry.h"

namespace szoom {

// Virtual camera window: centre and size in input-frame pixels.
struct ZoomParams {
  double cx = 0.0;
  double cy = 0.0;
  double vw = 1.0;
  double vh = 1.0;

  friend bool operator==(const ZoomParams&, const ZoomParams&) = default;
};

// Largest centred window of the output aspect ratio that fits the frame.
ZoomParams full_view(int frame_w, int frame_h, int out_w, int out_h);
ZoomParams params_from_rect(const Rect& r);

// Window in frame coordinates after shifting it inside the frame. The size is
// kept (capped at the frame size).
struct ViewWindow {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
};
ViewWindow view_window(const ZoomParams& p, int frame_w, int frame_h);
// Same window expressed as params (centre moved, size kept).
ZoomParams clamp_view(const ZoomParams& p, int frame_w, int frame_h);

// A0 (2f^3 - 3f^2 + 1) + A1 (-2f^3 + 3f^2); throws unless 0 <= f <= 1.
double hermite(double a0, double a1, double f);

enum class Phase { kFull, kZoomIn, kHold, kZoomOut };
const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

// Four-phase cycle: fixed full view for A%, zoom in over B%, hold for A%,
// zoom out over the remaining frames.
class AbSchedule {
 public:
  AbSchedule(int cycle_len, double a_pct = 20.0, double b_pct = 30.0);

  int cycle_len() const { return cycle_len_; }
  double a_pct() const { return a_pct_; }
  double b_pct() const { return b_pct_; }
  // Frame counts of full, zoom-in, hold, zoom-out.
  const std::array<int, 4>& lengths() const { return lengths_; }
  int phase_start(Phase p) const;
  Phase phase_of(int frame_in_cycle) const;

 private:
  int cycle_len_;
  double a_pct_;
  double b_pct_;
  std::array<int, 4> lengths_{};
};

// View for one frame of the cycle. Within a zoom phase f runs from 0 at the
// phase's first frame to 1 at its last; each field is interpolated on its own.
ZoomParams schedule_params(const AbSchedule& sched, int frame_in_cycle,
                           const ZoomParams& full, const ZoomParams& target);

// Per-field running median over the last N parameter sets.
class ParamSmoother {
 public:
  explicit ParamSmoother(int window = 5);

  int window() const { return window_; }
  std::size_t size() const { return history_.size(); }
  ZoomParams push(const ZoomParams& p);
  void reset() { history_.clear(); }

 private:
  int window_;
  std::deque<ZoomParams> history_;
};

// Moves the target's centre to the tracked window's centre (size unchanged)
// and returns the median-smoothed result.
ZoomParams refine_target(const ZoomParams& current_target,
                         const Rect& tracked_rect, ParamSmoother& smoother);

// Crops the (clamped) view and resamples it bilinearly to out_w x out_h.
Frame render(const Frame& frame, const ZoomParams& params, int out_w, int out_h);

}  // namespace szoom

#endif  // SZOOM_ZOOM_H_
