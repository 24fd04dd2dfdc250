#ifndef SZOOM_TRACKING_H_
#define SZOOM_TRACKING_H_

#include <vector>

#include "szoom/geometry.h"

namespace szoom {

enum class KernelProfile {
  kEpanechnikov,  // 1 - r^2 over the ellipse inscribed in the window
  kFlat,          // every pixel of the window weighs 1
};

struct TrackerParams {
  int bins_per_channel = 16;
  int max_iterations = 20;
  double epsilon = 1.0;  // stop when the shift is below this (pixels)
  KernelProfile kernel = KernelProfile::kEpanechnikov;
};

// Kernel-weighted RGB histogram over the window of size w x h centred at
// (cx, cy). Normalized to sum 1; all zeros if no pixel carries weight.
std::vector<double> color_histogram(const Frame& frame, double cx, double cy,
                                    int w, int h, const TrackerParams& params);

// Bhattacharyya coefficient of two normalized histograms.
double bhattacharyya(const std::vector<double>& p, const std::vector<double>& q);

// Mean-shift tracker state with a window size fixed for its lifetime.
struct TrackerState {
  std::vector<double> target_histogram;
  Rect rect;
  double center_x = 0.0;  // sub-pixel centre carried between steps
  double center_y = 0.0;
  int frame_w = 0;
  int frame_h = 0;
  TrackerParams params;
  int last_iterations = 0;
};

// Builds the target model from rect. Throws if rect is smaller than 2x2 or
// does not lie inside the frame.
TrackerState init_tracker(const Frame& frame, const Rect& rect,
                          const TrackerParams& params = {});

// Relocates the window on a new frame and returns it. Width and height never
// change; the window stays inside the frame.
Rect track_step(TrackerState& state, const Frame& frame);

}  // namespace szoom

#endif  // SZOOM_TRACKING_H_
