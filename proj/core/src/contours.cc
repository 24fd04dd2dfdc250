#include "szoom/contours.h"

#include <algorithm>
#include <array>
#include <numeric>

namespace szoom {

void BinaryMask::fill_rect(const Rect& r) {
  const int x0 = std::max(r.x, 0);
  const int y0 = std::max(r.y, 0);
  const int x1 = std::min(r.right(), width_);
  const int y1 = std::min(r.bottom(), height_);
  if (x0 >= x1) return;
  for (int y = y0; y < y1; ++y) {
    auto* row = &bits_[static_cast<std::size_t>(y) * width_];
    std::fill(row + x0, row + x1, std::uint8_t{1});
  }
}

std::int64_t BinaryMask::count() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0});
}

BinaryMask BinaryMask::threshold(const ScalarMap& map, double threshold) {
  BinaryMask out(map.width(), map.height());
  const auto v = map.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.bits_[i] = v[i] >= threshold ? 1 : 0;
  }
  return out;
}

ScalarMap BinaryMask::to_map() const {
  ScalarMap out(width_, height_);
  auto v = out.mutable_values();
  for (std::size_t i = 0; i < bits_.size(); ++i) v[i] = bits_[i] ? 1.0 : 0.0;
  return out;
}

namespace {

// Separable 3x3 min/max. Out-of-image pixels are skipped.
template <typename Op>
BinaryMask morph3x3(const BinaryMask& in, Op op) {
  const int w = in.width();
  const int h = in.height();
  BinaryMask horiz(w, h);
  const auto& src = in.bits();
  auto& hb = horiz.bits();
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* r = &src[static_cast<std::size_t>(y) * w];
    std::uint8_t* d = &hb[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = r[x];
      if (x > 0) v = op(v, r[x - 1]);
      if (x + 1 < w) v = op(v, r[x + 1]);
      d[x] = v;
    }
  }
  BinaryMask out(w, h);
  auto& ob = out.bits();
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* mid = &hb[static_cast<std::size_t>(y) * w];
    const std::uint8_t* up = y > 0 ? mid - w : nullptr;
    const std::uint8_t* down = y + 1 < h ? mid + w : nullptr;
    std::uint8_t* d = &ob[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = mid[x];
      if (up) v = op(v, up[x]);
      if (down) v = op(v, down[x]);
      d[x] = v;
    }
  }
  return out;
}

// Neighbour offsets in counter-clockwise order (as seen on screen, y down):
// E, NE, N, NW, W, SW, S, SE.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kDx[d] == dx && kDy[d] == dy) return d;
  }
  return -1;
}

}  // namespace

BinaryMask erode3x3(const BinaryMask& in) {
  return morph3x3(in, [](std::uint8_t a, std::uint8_t b) {
    return std::min(a, b);
  });
}

BinaryMask dilate3x3(const BinaryMask& in) {
  return morph3x3(in, [](std::uint8_t a, std::uint8_t b) {
    return std::max(a, b);
  });
}

std::vector<Rect> outer_border_boxes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const int pw = w + 2;
  // Zero-padded working image: 0 background, 1 unvisited foreground, +/-nbd
  // for pixels on border number nbd.
  std::vector<int> f(static_cast<std::size_t>(pw) * (h + 2), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y)) f[static_cast<std::size_t>(y + 1) * pw + x + 1] = 1;
    }
  }
  auto px = [&](int x, int y) -> int& {
    return f[static_cast<std::size_t>(y) * pw + x];
  };

  std::vector<Rect> boxes;
  int nbd = 1;
  for (int y = 1; y <= h; ++y) {
    for (int x = 1; x <= w; ++x) {
      const int v = px(x, y);
      if (v == 0) continue;
      const bool outer = v == 1 && px(x - 1, y) == 0;
      const bool hole = !outer && v >= 1 && px(x + 1, y) == 0;
      if (!outer && !hole) continue;
      ++nbd;

      int min_x = x, max_x = x, min_y = y, max_y = y;
      const int start_dir = outer ? 4 : 0;

      // Clockwise search around the start pixel for any foreground pixel.
      int first = -1;
      for (int k = 0; k < 8; ++k) {
        const int d = (start_dir - k + 8) % 8;
        if (px(x + kDx[d], y + kDy[d]) != 0) {
          first = d;
          break;
        }
      }
      if (first < 0) {
        px(x, y) = -nbd;
      } else {
        const int x1 = x + kDx[first];
        const int y1 = y + kDy[first];
        int x2 = x1, y2 = y1;
        int x3 = x, y3 = y;
        while (true) {
          const int back = direction_of(x2 - x3, y2 - y3);
          bool east_zero = false;
          int found = -1;
          for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (px(x3 + kDx[d], y3 + kDy[d]) != 0) {
              found = d;
              break;
            }
            if (d == 0) east_zero = true;
          }
          if (east_zero) {
            px(x3, y3) = -nbd;
          } else if (px(x3, y3) == 1) {
            px(x3, y3) = nbd;
          }
          min_x = std::min(min_x, x3);
          max_x = std::max(max_x, x3);
          min_y = std::min(min_y, y3);
          max_y = std::max(max_y, y3);
          const int x4 = x3 + kDx[found];
          const int y4 = y3 + kDy[found];
          if (x4 == x && y4 == y && x3 == x1 && y3 == y1) break;
          x2 = x3;
          y2 = y3;
          x3 = x4;
          y3 = y4;
        }
      }
      if (outer) {
        boxes.push_back(
            {min_x - 1, min_y - 1, max_x - min_x + 1, max_y - min_y + 1});
      }
    }
  }
  return boxes;
}

}  // namespace szoom
