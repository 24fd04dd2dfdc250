#ifndef SZOOM_GEOMETRY_H_
#define SZOOM_GEOMETRY_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace szoom {

// Thrown for contract violations on public entry points (bad dimensions,
// malformed input files, invalid configuration).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Real to pixel conversion used everywhere: round half up.
int round_half_up(double v);

// Axis-aligned pixel rectangle. (x, y) is the top-left corner.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  bool contains(const Rect& other) const {
    return other.x >= x && other.y >= y && other.right() <= right() &&
           other.bottom() <= bottom();
  }
  bool contains_point(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

std::string to_string(const Rect& r);

// Smallest rectangle covering both.
Rect bounding_union(const Rect& a, const Rect& b);
// Intersection area; zero when disjoint.
std::int64_t intersection_area(const Rect& a, const Rect& b);
double iou(const Rect& a, const Rect& b);
// Chebyshev gap between two rectangles' borders; 0 when they touch or overlap.
int gap(const Rect& a, const Rect& b);

// Moves r inside the frame; shrinks a dimension only if it exceeds the frame.
Rect clamp_rect(const Rect& r, int frame_w, int frame_h);

// Grows r symmetrically about its center until w/h matches target_aspect to
// within half a pixel, then clamps to the frame. If the grown side cannot fit
// in the frame it is capped at the frame size and the other side is reduced to
// keep the ratio.
Rect adjust_aspect(const Rect& r, double target_aspect, int frame_w,
                   int frame_h);

// Multiplies every field by factor with round-half-up; w and h stay >= 1.
Rect scale_rect(const Rect& r, double factor);

// Row-major grid of values in [0, 1].
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int width, int height, double fill = 0.0);
  // Values are clamped into [0, 1]. Throws if the count does not match.
  ScalarMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  // Writes are clamped into [0, 1].
  void set(int x, int y, double v);

  std::span<const double> values() const { return values_; }
  std::span<const double> row(int y) const {
    return std::span<const double>(values_).subspan(
        static_cast<std::size_t>(y) * width_, width_);
  }

  // Raw access for bulk kernels. Callers must leave values in [0, 1].
  std::span<double> mutable_values() { return values_; }

  // Sum of values inside r (r is clamped to the map first).
  double sum(const Rect& r) const;
  double total() const;

  bool same_shape(const ScalarMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Nearest-neighbour resample to a new grid.
  ScalarMap resized_nearest(int width, int height) const;

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

void require_same_shape(const ScalarMap& a, const ScalarMap& b,
                        const char* what);

// 8-bit RGB image with its position in the stream.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, std::int64_t index = 0);
  Frame(int width, int height, std::vector<std::uint8_t> rgb,
        std::int64_t index = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t index() const { return index_; }
  void set_index(std::int64_t index) { index_ = index; }

  std::uint8_t at(int x, int y, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::uint8_t* pixel(int x, int y) {
    return &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3];
  }
  const std::uint8_t* pixel(int x, int y) const {
    return &pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3];
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void fill_rect(const Rect& r, std::uint8_t red, std::uint8_t green,
                 std::uint8_t blue);

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> mutable_pixels() { return pixels_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t index_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Bilinear resample of the real-valued source window
// [x0, x0 + src_w) x [y0, y0 + src_h) into an out_w x out_h image.
// Sample positions are pixel centres; reads outside the frame clamp to the
// edge.
Frame resample_bilinear(const Frame& src, double x0, double y0, double src_w,
                        double src_h, int out_w, int out_h);

// Area-averaging downscale used by the detectors (fixed-point box filter).
Frame downscale_area(const Frame& src, int out_w, int out_h);
// Same, writing into out and reusing its storage when the shape matches.
void downscale_area(const Frame& src, int out_w, int out_h, Frame& out);

}  // namespace szoom

#endif  // SZOOM_GEOMETRY_H_
