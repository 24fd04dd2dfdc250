#ifndef SZOOM_CONTOURS_H_
#define SZOOM_CONTOURS_H_

#include <cstdint>
#include <vector>

#include "szoom/geometry.h"

namespace szoom {

// Binary raster, one byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height)
      : width_(width),
        height_(height),
        bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  void fill_rect(const Rect& r);
  std::int64_t count() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  // Pixels with value >= threshold become 1.
  static BinaryMask threshold(const ScalarMap& map, double threshold);
  ScalarMap to_map() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// 3x3 square structuring element. Pixels outside the image do not take part.
BinaryMask erode3x3(const BinaryMask& in);
BinaryMask dilate3x3(const BinaryMask& in);

// Bounding boxes of the outer borders found by Suzuki-Abe border following
// (8-connectivity), in raster order of their starting pixels. Each box is the
// bounding box of one 8-connected component.
std::vector<Rect> outer_border_boxes(const BinaryMask& mask);

}  // namespace szoom

#endif  // SZOOM_CONTOURS_H_
