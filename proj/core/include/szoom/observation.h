#ifndef SZOOM_OBSERVATION_H_
#define SZOOM_OBSERVATION_H_

#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "szoom/contours.h"
#include "szoom/geometry.h"

namespace szoom {

inline constexpr const char* kMotion = "motion";
inline constexpr const char* kHuman = "human";
inline constexpr const char* kFace = "face";

// One detector hit, in full-resolution frame coordinates.
struct DetectionRecord {
  std::int64_t frame = 0;
  std::string kind;
  Rect rect;
  double confidence = 1.0;

  friend bool operator==(const DetectionRecord&,
                         const DetectionRecord&) = default;
};

// Detection records grouped by frame, as read from a JSON Lines stream.
class DetectionIndex {
 public:
  DetectionIndex() = default;
  explicit DetectionIndex(std::vector<DetectionRecord> records);

  // Records of one kind on one frame.
  std::vector<DetectionRecord> find(std::int64_t frame,
                                    const std::string& kind) const;
  const std::vector<DetectionRecord>& records() const { return records_; }
  std::vector<std::string> kinds() const;
  bool empty() const { return records_.empty(); }

 private:
  std::vector<DetectionRecord> records_;
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> by_frame_;
};

// Parses a detection stream. Every line must be a JSON object with integer
// frame/x/y/w/h, string kind and numeric confidence in [0, 1]; frames must be
// non-decreasing. If frame_w/frame_h are positive, rectangles are clamped to
// the frame and records lying entirely outside it are rejected. Errors name
// the 1-based line number.
DetectionIndex read_detection_stream(std::istream& in, int frame_w = 0,
                                     int frame_h = 0);
DetectionIndex read_detection_file(const std::string& path, int frame_w = 0,
                                   int frame_h = 0);
std::string format_detection(const DetectionRecord& rec);

// Binary map that is 1 inside the union of the records' rectangles.
// All records must share frame index and kind and lie inside the frame.
ScalarMap rasterize(std::span<const DetectionRecord> detections, int frame_w,
                    int frame_h);
// Same, from bare rectangles (clipped to the grid).
ScalarMap rasterize_rects(std::span<const Rect> rects, int width, int height);
// Same, writing into out and reusing its storage when the shape matches.
void rasterize_rects(std::span<const Rect> rects, int width, int height, ScalarMap& out);

// Per-pixel Gaussian mixture background model over RGB, with a fixed number
// of components per pixel and weight-ranked background selection.
struct MogParams {
  int components = 4;
  double learning_rate = 0.005;
  // Match gate in standard deviations (RMS over the three channels).
  double variance_threshold = 2.5;
  double initial_variance = 15.0;
  double min_variance = 4.0;
  double max_variance = 75.0;
  // Leading components whose weights sum past this form the background.
  double background_ratio = 0.9;
};

class MogModel {
 public:
  MogModel() = default;
  MogModel(int width, int height, MogParams params = {});

  int width() const { return width_; }
  int height() const { return height_; }
  const MogParams& params() const { return params_; }
  std::int64_t frames_seen() const { return frames_seen_; }

  // Classifies every pixel of the frame (which must match the model size) and
  // updates the mixture. Writes 1 for foreground into `foreground`.
  void apply(const Frame& frame, BinaryMask& foreground);

  // Component weights of one pixel, in storage order.
  std::vector<float> weights_at(int x, int y) const;

 private:
  int width_ = 0;
  int height_ = 0;
  MogParams params_;
  std::int64_t frames_seen_ = 0;
  // Structure of arrays, index = pixel * K + k.
  std::vector<float> weight_;
  std::vector<float> mean_;  // 3 floats per component
  std::vector<float> var_;
  std::vector<std::uint8_t> active_;  // active component count per pixel
};

// The six-step motion observation: downscale, MoG foreground, 3x3 erosion then
// dilation, component bounding boxes, rescale, union.
class MotionDetector {
 public:
  MotionDetector(int frame_w, int frame_h, double scale,
                 MogParams params = {});

  double scale() const { return scale_; }
  int grid_width() const { return grid_w_; }
  int grid_height() const { return grid_h_; }
  const MogModel& model() const { return model_; }

  // Updates the background model only.
  void learn(const Frame& frame);
  // Runs the detector on one frame; returns the foreground rectangles in
  // detector-grid coordinates.
  std::vector<Rect> detect_grid(const Frame& frame);
  // Rectangles rescaled to full-resolution frame coordinates.
  std::vector<Rect> detect(const Frame& frame);
  // Full-resolution binary observation map.
  ScalarMap detect_map(const Frame& frame);
  void detect_map(const Frame& frame, ScalarMap& out);

 private:
  int frame_w_;
  int frame_h_;
  double scale_;
  int grid_w_;
  int grid_h_;
  MogModel model_;
  BinaryMask foreground_;
  Frame scaled_;
};

// Detector grid size for a frame and scale factor.
int grid_extent(int full, double scale);

// Persistence of one observation kind over the last `omega` binary maps.
class Accumulator {
 public:
  Accumulator(std::string kind, int omega);

  const std::string& kind() const { return kind_; }
  int omega() const { return omega_; }
  std::size_t frames_held() const { return window_.size(); }

  // Adds a binary map and returns the mean of the last min(omega, seen) maps.
  ScalarMap push(const ScalarMap& binary_map);
  // Current mean without adding anything. Empty map before the first push.
  ScalarMap current() const;
  void reset();

 private:
  std::string kind_;
  int omega_;
  std::deque<BinaryMask> window_;
  std::vector<int> counts_;
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t true_positive = 0;
  std::int64_t false_positive = 0;
  std::int64_t false_negative = 0;
};

// Pixel-level precision/recall/F1. Maps are binarized at 0.5.
PrfScores evaluate_prf(const ScalarMap& pred, const ScalarMap& truth);

}  // namespace szoom

#endif  // SZOOM_OBSERVATION_H_
