#include "szoom/zoom.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace szoom {

ZoomParams full_view(int frame_w, int frame_h, int out_w, int out_h) {
  const double aspect = static_cast<double>(out_w) / out_h;
  double vw = frame_w;
  double vh = frame_w / aspect;
  if (vh > frame_h) {
    vh = frame_h;
    vw = frame_h * aspect;
  }
  return {frame_w / 2.0, frame_h / 2.0, vw, vh};
}

ZoomParams params_from_rect(const Rect& r) {
  return {r.center_x(), r.center_y(), static_cast<double>(r.w),
          static_cast<double>(r.h)};
}

ViewWindow view_window(const ZoomParams& p, int frame_w, int frame_h) {
  ViewWindow v;
  v.w = std::clamp(p.vw, 1.0, static_cast<double>(frame_w));
  v.h = std::clamp(p.vh, 1.0, static_cast<double>(frame_h));
  v.x = std::clamp(p.cx - v.w / 2.0, 0.0, frame_w - v.w);
  v.y = std::clamp(p.cy - v.h / 2.0, 0.0, frame_h - v.h);
  return v;
}

ZoomParams clamp_view(const ZoomParams& p, int frame_w, int frame_h) {
  const ViewWindow v = view_window(p, frame_w, frame_h);
  return {v.x + v.w / 2.0, v.y + v.h / 2.0, v.w, v.h};
}

double hermite(double a0, double a1, double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw Error("hermite: f must lie in [0, 1]");
  }
  const double f2 = f * f;
  const double f3 = f2 * f;
  return a0 * (2.0 * f3 - 3.0 * f2 + 1.0) + a1 * (-2.0 * f3 + 3.0 * f2);
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kFull: return "full";
    case Phase::kZoomIn: return "zoom_in";
    case Phase::kHold: return "hold";
    case Phase::kZoomOut: return "zoom_out";
  }
  return "full";
}

Phase phase_from_name(const std::string& name) {
  if (name == "full") return Phase::kFull;
  if (name == "zoom_in") return Phase::kZoomIn;
  if (name == "hold") return Phase::kHold;
  if (name == "zoom_out") return Phase::kZoomOut;
  throw Error("unknown phase '" + name + "'");
}

AbSchedule::AbSchedule(int cycle_len, double a_pct, double b_pct)
    : cycle_len_(cycle_len), a_pct_(a_pct), b_pct_(b_pct) {
  if (cycle_len < 1) throw Error("AbSchedule: cycle length must be >= 1");
  if (!(a_pct > 0.0) || !(b_pct > 0.0) || 2.0 * (a_pct + b_pct) > 100.0 + 1e-9) {
    throw Error("AbSchedule: need A, B > 0 and 2A + 2B <= 100");
  }
  // Small epsilon so that e.g. 30% of 150 floors to 45, not 44.
  const int a = static_cast<int>(std::floor(a_pct * cycle_len / 100.0 + 1e-9));
  const int b = static_cast<int>(std::floor(b_pct * cycle_len / 100.0 + 1e-9));
  lengths_ = {a, b, a, cycle_len - 2 * a - b};
}

int AbSchedule::phase_start(Phase p) const {
  int start = 0;
  for (int i = 0; i < static_cast<int>(p); ++i) start += lengths_[i];
  return start;
}

Phase AbSchedule::phase_of(int frame_in_cycle) const {
  if (frame_in_cycle < 0 || frame_in_cycle >= cycle_len_) {
    throw Error("AbSchedule: frame " + std::to_string(frame_in_cycle) +
                " is outside the cycle");
  }
  int end = 0;
  for (int i = 0; i < 4; ++i) {
    end += lengths_[i];
    if (frame_in_cycle < end) return static_cast<Phase>(i);
  }
  return Phase::kZoomOut;
}

namespace {

ZoomParams interpolate(const ZoomParams& from, const ZoomParams& to, double f) {
  return {hermite(from.cx, to.cx, f), hermite(from.cy, to.cy, f),
          hermite(from.vw, to.vw, f), hermite(from.vh, to.vh, f)};
}

}  // namespace

ZoomParams schedule_params(const AbSchedule& sched, int frame_in_cycle,
                           const ZoomParams& full, const ZoomParams& target) {
  const Phase phase = sched.phase_of(frame_in_cycle);
  const int len = sched.lengths()[static_cast<int>(phase)];
  const int t0 = sched.phase_start(phase);
  const double f =
      len > 1 ? static_cast<double>(frame_in_cycle - t0) / (len - 1) : 1.0;
  switch (phase) {
    case Phase::kFull: return full;
    case Phase::kZoomIn: return interpolate(full, target, f);
    case Phase::kHold: return target;
    case Phase::kZoomOut: return interpolate(target, full, f);
  }
  return full;
}

ParamSmoother::ParamSmoother(int window) : window_(window) {
  if (window < 1) throw Error("ParamSmoother: window must be >= 1");
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

ZoomParams ParamSmoother::push(const ZoomParams& p) {
  history_.push_back(p);
  if (history_.size() > static_cast<std::size_t>(window_)) history_.pop_front();
  std::vector<double> cx, cy, vw, vh;
  for (const auto& h : history_) {
    cx.push_back(h.cx);
    cy.push_back(h.cy);
    vw.push_back(h.vw);
    vh.push_back(h.vh);
  }
  return {median(cx), median(cy), median(vw), median(vh)};
}

ZoomParams refine_target(const ZoomParams& current_target,
                         const Rect& tracked_rect, ParamSmoother& smoother) {
  return smoother.push({tracked_rect.center_x(), tracked_rect.center_y(),
                        current_target.vw, current_target.vh});
}

Frame render(const Frame& frame, const ZoomParams& params, int out_w,
             int out_h) {
  const ViewWindow v = view_window(params, frame.width(), frame.height());
  return resample_bilinear(frame, v.x, v.y, v.w, v.h, out_w, out_h);
}

}  // namespace szoom
