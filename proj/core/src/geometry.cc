#include "szoom/geometry.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace szoom {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::string to_string(const Rect& r) {
  return "(" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
         std::to_string(r.w) + "," + std::to_string(r.h) + ")";
}

Rect bounding_union(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

std::int64_t intersection_area(const Rect& a, const Rect& b) {
  const int w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const int h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0 || h <= 0) return 0;
  return static_cast<std::int64_t>(w) * h;
}

double iou(const Rect& a, const Rect& b) {
  const auto inter = intersection_area(a, b);
  const auto uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

int gap(const Rect& a, const Rect& b) {
  const int gx = std::max({0, b.x - a.right(), a.x - b.right()});
  const int gy = std::max({0, b.y - a.bottom(), a.y - b.bottom()});
  return std::max(gx, gy);
}

Rect clamp_rect(const Rect& r, int frame_w, int frame_h) {
  Rect out = r;
  out.w = std::clamp(r.w, 1, frame_w);
  out.h = std::clamp(r.h, 1, frame_h);
  out.x = std::clamp(r.x, 0, frame_w - out.w);
  out.y = std::clamp(r.y, 0, frame_h - out.h);
  return out;
}

Rect adjust_aspect(const Rect& r, double target_aspect, int frame_w,
                   int frame_h) {
  if (!(target_aspect > 0.0)) {
    throw Error("adjust_aspect: target aspect must be positive");
  }
  constexpr double kEps = 1e-9;
  int new_w = r.w;
  int new_h = r.h;
  const int want_w = round_half_up(r.h * target_aspect);
  if (want_w > r.w) {
    new_w = want_w;
  } else {
    const int want_h = static_cast<int>(std::ceil(r.w / target_aspect - kEps));
    if (want_h > r.h) {
      new_h = want_h;
      new_w = round_half_up(new_h * target_aspect);
    }
  }
  // The grown side no longer fits: keep the ratio at the frame's limit.
  if (new_w > frame_w) {
    new_h = std::clamp(static_cast<int>(std::floor(frame_w / target_aspect + kEps)),
                       1, frame_h);
    new_w = std::clamp(round_half_up(new_h * target_aspect), 1, frame_w);
  }
  if (new_h > frame_h) {
    new_h = frame_h;
    new_w = std::clamp(round_half_up(frame_h * target_aspect), 1, frame_w);
  }
  const Rect grown{round_half_up(r.center_x() - new_w / 2.0),
                   round_half_up(r.center_y() - new_h / 2.0), new_w, new_h};
  return clamp_rect(grown, frame_w, frame_h);
}

Rect scale_rect(const Rect& r, double factor) {
  if (!(factor > 0.0)) throw Error("scale_rect: factor must be positive");
  return {round_half_up(r.x * factor), round_half_up(r.y * factor),
          std::max(1, round_half_up(r.w * factor)),
          std::max(1, round_half_up(r.h * factor))};
}

// ---------------------------------------------------------------------------
// ScalarMap

ScalarMap::ScalarMap(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error("ScalarMap: negative dimensions");
  values_.assign(static_cast<std::size_t>(width) * height,
                 std::clamp(fill, 0.0, 1.0));
}

ScalarMap::ScalarMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 0 || height < 0) throw Error("ScalarMap: negative dimensions");
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error("ScalarMap: value count does not match width*height");
  }
  for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
}

void ScalarMap::set(int x, int y, double v) {
  values_[static_cast<std::size_t>(y) * width_ + x] = std::clamp(v, 0.0, 1.0);
}

double ScalarMap::sum(const Rect& r) const {
  const int x0 = std::max(r.x, 0);
  const int y0 = std::max(r.y, 0);
  const int x1 = std::min(r.right(), width_);
  const int y1 = std::min(r.bottom(), height_);
  double s = 0.0;
  for (int y = y0; y < y1; ++y) {
    const double* p = &values_[static_cast<std::size_t>(y) * width_];
    for (int x = x0; x < x1; ++x) s += p[x];
  }
  return s;
}

double ScalarMap::total() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ScalarMap ScalarMap::resized_nearest(int width, int height) const {
  if (width == width_ && height == height_) return *this;
  ScalarMap out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(height_ - 1, static_cast<int>(
                                             (y + 0.5) * height_ / height));
    for (int x = 0; x < width; ++x) {
      const int sx =
          std::min(width_ - 1, static_cast<int>((x + 0.5) * width_ / width));
      out.values_[static_cast<std::size_t>(y) * width + x] = at(sx, sy);
    }
  }
  return out;
}

void require_same_shape(const ScalarMap& a, const ScalarMap& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw Error(std::string(what) + ": dimension mismatch (" +
                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                " vs " + std::to_string(b.width()) + "x" +
                std::to_string(b.height()) + ")");
  }
}

// ---------------------------------------------------------------------------
// Frame

Frame::Frame(int width, int height, std::int64_t index)
    : width_(width), height_(height), index_(index) {
  if (width < 1 || height < 1) throw Error("Frame: dimensions must be >= 1");
  pixels_.assign(static_cast<std::size_t>(width) * height * 3, 0);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> rgb,
             std::int64_t index)
    : width_(width), height_(height), index_(index), pixels_(std::move(rgb)) {
  if (width < 1 || height < 1) throw Error("Frame: dimensions must be >= 1");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error("Frame: pixel buffer size does not match dimensions");
  }
}

void Frame::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

void Frame::fill_rect(const Rect& r, std::uint8_t red, std::uint8_t green,
                      std::uint8_t blue) {
  const int x0 = std::max(r.x, 0);
  const int y0 = std::max(r.y, 0);
  const int x1 = std::min(r.right(), width_);
  const int y1 = std::min(r.bottom(), height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y, red, green, blue);
  }
}

namespace {

struct Tap {
  int i0;
  int i1;
  float w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> bilinear_taps(double origin, double extent, int out_n,
                               int src_n) {
  std::vector<Tap> taps(out_n);
  const double step = extent / out_n;
  for (int i = 0; i < out_n; ++i) {
    double s = origin + (i + 0.5) * step - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_n - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_n - 1);
    taps[i] = {i0, i1, static_cast<float>(s - i0)};
  }
  return taps;
}

// Fractional box filter weights along one axis in fixed point, padded to a
// fixed tap count. The weights of every output sum to exactly 1 << bits.

struct BoxTaps {
  int taps = 0;
  std::vector<int> first;
  std::vector<std::uint16_t> weights;  // out_n * taps
};

BoxTaps box_taps(int src_n, int out_n, int bits) {
  const int one = 1 << bits;
  BoxTaps t;
  const double ratio = static_cast<double>(src_n) / out_n;
  t.taps = static_cast<int>(std::ceil(ratio)) + 1;
  t.first.resize(out_n);
  t.weights.assign(static_cast<std::size_t>(out_n) * t.taps, 0);
  for (int i = 0; i < out_n; ++i) {
    const double a = i * ratio;
    const double b = (i + 1) * ratio;
    const int first = static_cast<int>(std::floor(a));
    const int last = std::min(src_n - 1, static_cast<int>(std::ceil(b)) - 1);
    t.first[i] = first;
    std::uint16_t* w = &t.weights[static_cast<std::size_t>(i) * t.taps];
    int total = 0;
    int largest = 0;
    for (int s = first; s <= last; ++s) {
      const double lo = std::max(a, static_cast<double>(s));
      const double hi = std::min(b, static_cast<double>(s + 1));
      w[s - first] = static_cast<std::uint16_t>(std::lround((hi - lo) / ratio * one));
      total += w[s - first];
      if (w[s - first] > w[largest]) largest = s - first;
    }
    w[largest] = static_cast<std::uint16_t>(w[largest] + one - total);
  }
  return t;
}

}  // namespace

Frame resample_bilinear(const Frame& src, double x0, double y0, double src_w,
                        double src_h, int out_w, int out_h) {
  Frame out(out_w, out_h, src.index());
  const auto xt = bilinear_taps(x0, src_w, out_w, src.width());
  const auto yt = bilinear_taps(y0, src_h, out_h, src.height());
  for (int y = 0; y < out_h; ++y) {
    const Tap& ty = yt[y];
    const std::uint8_t* r0 = src.pixel(0, ty.i0);
    const std::uint8_t* r1 = src.pixel(0, ty.i1);
    std::uint8_t* dst = out.pixel(0, y);
    for (int x = 0; x < out_w; ++x) {
      const Tap& tx = xt[x];
      for (int c = 0; c < 3; ++c) {
        const float top = r0[tx.i0 * 3 + c] * (1.0f - tx.w1) +
                          r0[tx.i1 * 3 + c] * tx.w1;
        const float bot = r1[tx.i0 * 3 + c] * (1.0f - tx.w1) +
                          r1[tx.i1 * 3 + c] * tx.w1;
        const float v = top * (1.0f - ty.w1) + bot * ty.w1;
        dst[x * 3 + c] = static_cast<std::uint8_t>(
            std::clamp(v + 0.5f, 0.0f, 255.0f));
      }
    }
  }
  return out;
}

namespace {

template <int kTaps>
void horizontal_taps(const std::uint16_t* col, const BoxTaps& xs, std::uint8_t* dst, int out_w,
                     int taps) {
  const int n = kTaps > 0 ? kTaps : taps;
  constexpr std::uint32_t kHalf = 1u << 23;
  for (int x = 0; x < out_w; ++x) {
    const std::uint16_t* p = &col[static_cast<std::size_t>(xs.first[x]) * 3];
    const std::uint16_t* wx = &xs.weights[static_cast<std::size_t>(x) * n];
    std::uint32_t a0 = kHalf, a1 = kHalf, a2 = kHalf;
    for (int k = 0; k < n; ++k, p += 3) {
      a0 += static_cast<std::uint32_t>(p[0]) * wx[k];
      a1 += static_cast<std::uint32_t>(p[1]) * wx[k];
      a2 += static_cast<std::uint32_t>(p[2]) * wx[k];
    }
    dst[x * 3 + 0] = static_cast<std::uint8_t>(a0 >> 24);
    dst[x * 3 + 1] = static_cast<std::uint8_t>(a1 >> 24);
    dst[x * 3 + 2] = static_cast<std::uint8_t>(a2 >> 24);
  }
}

void horizontal_pass(const std::uint16_t* col, const BoxTaps& xs, std::uint8_t* dst, int out_w) {
  switch (xs.taps) {
    case 2: return horizontal_taps<2>(col, xs, dst, out_w, 2);
    case 3: return horizontal_taps<3>(col, xs, dst, out_w, 3);
    case 4: return horizontal_taps<4>(col, xs, dst, out_w, 4);
    default: return horizontal_taps<0>(col, xs, dst, out_w, xs.taps);
  }
}

}  // namespace

Frame downscale_area(const Frame& src, int out_w, int out_h) {
  Frame out;
  downscale_area(src, out_w, out_h, out);
  return out;
}

void downscale_area(const Frame& src, int out_w, int out_h, Frame& out) {
  if (out_w == src.width() && out_h == src.height()) {
    out = src;
    return;
  }
  // Vertical weights are 8-bit so the row sums stay in 16 bits; horizontal
  // weights are 16-bit, and 255 * 2^24 plus rounding still fits in 32 bits.
  constexpr int kYBits = 8;
  constexpr int kXBits = 16;
  const BoxTaps xs = box_taps(src.width(), out_w, kXBits);
  const BoxTaps ys = box_taps(src.height(), out_h, kYBits);

  // One output row at a time: vertical pass over the few source rows it
  // covers, then the horizontal pass from that row. The row buffer carries
  // zero padding so padded taps never read past its end.
  const std::size_t row_len = static_cast<std::size_t>(src.width()) * 3;
  std::vector<std::uint16_t> col(row_len + static_cast<std::size_t>(xs.taps) * 3, 0);
  if (out.width() != out_w || out.height() != out_h) out = Frame(out_w, out_h);
  out.set_index(src.index());
  static_assert(kYBits + kXBits == 24);
  for (int y = 0; y < out_h; ++y) {
    std::fill(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(row_len), 0);
    const std::uint16_t* wy = &ys.weights[static_cast<std::size_t>(y) * ys.taps];
    for (int k = 0; k < ys.taps; ++k) {
      const int sy = ys.first[y] + k;
      if (wy[k] == 0 || sy >= src.height()) continue;
      const std::uint8_t* row = src.pixel(0, sy);
      const std::uint16_t wgt = wy[k];
      for (std::size_t i = 0; i < row_len; ++i) {
        col[i] = static_cast<std::uint16_t>(col[i] + row[i] * wgt);
      }
    }
    horizontal_pass(col.data(), xs, out.pixel(0, y), out_w);
  }
}

}  // namespace szoom
