#include "szoom/synthetic.h"

#include <algorithm>
#include <cmath>

#include "szoom/observation.h"

namespace szoom {

namespace {

double bounce(double p, double limit) {
  if (limit <= 0.0) return 0.0;
  const double period = 2.0 * limit;
  double q = std::fmod(p, period);
  if (q < 0.0) q += period;
  return q > limit ? period - q : q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rect mover_rect(const SyntheticScene& scene, const Mover& m, std::int64_t t) {
  Rect base = m.start;
  std::int64_t dt = t;
  if (m.jump_frame >= 0 && t >= m.jump_frame) {
    base = m.jump_to;
    dt = t - m.jump_frame;
  }
  const double x = bounce(base.x + m.vx * static_cast<double>(dt),
                          scene.width - base.w);
  const double y = bounce(base.y + m.vy * static_cast<double>(dt),
                          scene.height - base.h);
  return {round_half_up(x), round_half_up(y), base.w, base.h};
}

Frame render_scene(const SyntheticScene& scene, std::int64_t t) {
  const int w = scene.width;
  const int h = scene.height;
  Frame frame(w, h, t);

  std::vector<float> col(w), row(h), diag(static_cast<std::size_t>(w) + h);
  for (int x = 0; x < w; ++x) col[x] = scene.textured ? 30.0f * std::sin(x * 0.021f) : 0.0f;
  for (int y = 0; y < h; ++y) row[y] = scene.textured ? 25.0f * std::cos(y * 0.033f) : 0.0f;
  for (int i = 0; i < w + h; ++i) diag[i] = scene.textured ? 15.0f * std::sin(i * 0.011f) : 0.0f;

  std::uint64_t state = splitmix64(scene.seed * 0x100000001B3ULL + static_cast<std::uint64_t>(t));
  const int span = 2 * scene.noise + 1;
  auto px = frame.mutable_pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float base = 110.0f + col[x] + row[y] + diag[x + y];
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      for (int c = 0; c < 3; ++c) {
        int n = 0;
        if (scene.noise > 0) {
          state ^= state << 13;
          state ^= state >> 7;
          state ^= state << 17;
          n = static_cast<int>(state % static_cast<std::uint64_t>(span)) - scene.noise;
        }
        const float tint = c == 0 ? 0.0f : (c == 1 ? 8.0f : -8.0f);
        px[i + c] = static_cast<std::uint8_t>(
            std::clamp(base + tint + static_cast<float>(n), 0.0f, 255.0f));
      }
    }
  }
  for (const Mover& m : scene.movers) {
    const Rect r = mover_rect(scene, m, t);
    frame.fill_rect(r, m.color[0], m.color[1], m.color[2]);
  }
  return frame;
}

ScalarMap scene_truth(const SyntheticScene& scene, std::int64_t t) {
  std::vector<Rect> rects;
  for (const Mover& m : scene.movers) rects.push_back(mover_rect(scene, m, t));
  return rasterize_rects(rects, scene.width, scene.height);
}

}  // namespace szoom
