#include "szoom/tracking.h"

#include <algorithm>
#include <cmath>

namespace szoom {

namespace {

int bin_of(const std::uint8_t* px, int bins) {
  const int r = px[0] * bins / 256;
  const int g = px[1] * bins / 256;
  const int b = px[2] * bins / 256;
  return (r * bins + g) * bins + b;
}

// Calls fn(x, y, kernel_weight) for every pixel of the window with positive
// weight. The window is the w x h box centred at (cx, cy), cut to the frame.
template <typename Fn>
void for_each_window_pixel(const Frame& frame, double cx, double cy, int w,
                           int h, KernelProfile kernel, Fn fn) {
  const double hw = w / 2.0;
  const double hh = h / 2.0;
  const int x0 = std::max(0, round_half_up(cx - hw));
  const int y0 = std::max(0, round_half_up(cy - hh));
  const int x1 = std::min(frame.width(), x0 + w);
  const int y1 = std::min(frame.height(), y0 + h);
  for (int y = y0; y < y1; ++y) {
    const double dy = (y + 0.5 - cy) / hh;
    for (int x = x0; x < x1; ++x) {
      double k = 1.0;
      if (kernel == KernelProfile::kEpanechnikov) {
        const double dx = (x + 0.5 - cx) / hw;
        k = 1.0 - (dx * dx + dy * dy);
        if (k <= 0.0) continue;
      }
      fn(x, y, k);
    }
  }
}

void clamp_center(const TrackerState& s, double& cx, double& cy) {
  cx = std::clamp(cx, s.rect.w / 2.0, s.frame_w - s.rect.w / 2.0);
  cy = std::clamp(cy, s.rect.h / 2.0, s.frame_h - s.rect.h / 2.0);
}

}  // namespace

std::vector<double> color_histogram(const Frame& frame, double cx, double cy,
                                    int w, int h, const TrackerParams& params) {
  const int bins = params.bins_per_channel;
  std::vector<double> hist(static_cast<std::size_t>(bins) * bins * bins, 0.0);
  double total = 0.0;
  for_each_window_pixel(frame, cx, cy, w, h, params.kernel,
                        [&](int x, int y, double k) {
                          hist[bin_of(frame.pixel(x, y), bins)] += k;
                          total += k;
                        });
  if (total > 0.0) {
    for (double& v : hist) v /= total;
  }
  return hist;
}

double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q) {
  double rho = 0.0;
  for (std::size_t i = 0; i < p.size() && i < q.size(); ++i) {
    rho += std::sqrt(p[i] * q[i]);
  }
  return rho;
}

TrackerState init_tracker(const Frame& frame, const Rect& rect,
                          const TrackerParams& params) {
  if (rect.w < 2 || rect.h < 2) {
    throw Error("init_tracker: window " + to_string(rect) +
                " is degenerate (needs w, h >= 2)");
  }
  if (!Rect{0, 0, frame.width(), frame.height()}.contains(rect)) {
    throw Error("init_tracker: window " + to_string(rect) +
                " is not inside the frame");
  }
  if (params.bins_per_channel < 1 || params.bins_per_channel > 256) {
    throw Error("init_tracker: bins per channel must lie in [1, 256]");
  }
  TrackerState s;
  s.rect = rect;
  s.center_x = rect.center_x();
  s.center_y = rect.center_y();
  s.frame_w = frame.width();
  s.frame_h = frame.height();
  s.params = params;
  s.target_histogram =
      color_histogram(frame, s.center_x, s.center_y, rect.w, rect.h, params);
  return s;
}

Rect track_step(TrackerState& s, const Frame& frame) {
  if (frame.width() != s.frame_w || frame.height() != s.frame_h) {
    throw Error("track_step: frame size differs from the initial frame");
  }
  const int bins = s.params.bins_per_channel;
  const auto& q = s.target_histogram;
  double cx = s.center_x;
  double cy = s.center_y;
  int iter = 0;
  for (; iter < s.params.max_iterations; ++iter) {
    const auto p = color_histogram(frame, cx, cy, s.rect.w, s.rect.h, s.params);
    const double rho0 = bhattacharyya(p, q);

    // Back-projection weights sqrt(q/p); the Epanechnikov profile has a
    // constant derivative, so the new centre is their weighted mean.
    double sx = 0.0, sy = 0.0, sw = 0.0;
    for_each_window_pixel(frame, cx, cy, s.rect.w, s.rect.h, s.params.kernel,
                          [&](int x, int y, double) {
                            const int u = bin_of(frame.pixel(x, y), bins);
                            if (p[u] <= 0.0 || q[u] <= 0.0) return;
                            const double wgt = std::sqrt(q[u] / p[u]);
                            sx += (x + 0.5) * wgt;
                            sy += (y + 0.5) * wgt;
                            sw += wgt;
                          });
    if (sw <= 0.0) break;  // nothing of the target in view

    double nx = sx / sw;
    double ny = sy / sw;
    clamp_center(s, nx, ny);
    // Halve the step while the similarity drops.
    for (int halving = 0; halving < 5; ++halving) {
      const auto pn =
          color_histogram(frame, nx, ny, s.rect.w, s.rect.h, s.params);
      if (bhattacharyya(pn, q) >= rho0) break;
      if (std::hypot(nx - cx, ny - cy) < s.params.epsilon) break;
      nx = 0.5 * (nx + cx);
      ny = 0.5 * (ny + cy);
    }
    const double shift = std::hypot(nx - cx, ny - cy);
    cx = nx;
    cy = ny;
    if (shift < s.params.epsilon) {
      ++iter;
      break;
    }
  }
  s.last_iterations = iter;
  s.center_x = cx;
  s.center_y = cy;
  s.rect = clamp_rect({round_half_up(cx - s.rect.w / 2.0),
                       round_half_up(cy - s.rect.h / 2.0), s.rect.w, s.rect.h},
                      s.frame_w, s.frame_h);
  return s.rect;
}

}  // namespace szoom
