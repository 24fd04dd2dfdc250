#ifndef SZOOM_SYNTHETIC_H_
#define SZOOM_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <vector>

#include "szoom/geometry.h"

namespace szoom {

// A solid rectangle moving at constant velocity, optionally teleporting to a
// new position at a given frame.
struct Mover {
  Rect start;
  double vx = 0.0;
  double vy = 0.0;
  std::array<std::uint8_t, 3> color = {220, 40, 40};
  // If jump_frame >= 0, from that frame on the mover starts again at jump_to.
  std::int64_t jump_frame = -1;
  Rect jump_to;
};

// Deterministic test scene: a smooth textured background, per-frame sensor
// noise and solid movers that bounce off the frame borders.
struct SyntheticScene {
  int width = 640;
  int height = 360;
  std::vector<Mover> movers;
  int noise = 2;  // uniform noise amplitude in intensity levels
  std::uint64_t seed = 1;
  bool textured = true;
};

Rect mover_rect(const SyntheticScene& scene, const Mover& m, std::int64_t t);
Frame render_scene(const SyntheticScene& scene, std::int64_t t);
// Binary map of all movers at frame t.
ScalarMap scene_truth(const SyntheticScene& scene, std::int64_t t);

}  // namespace szoom

#endif  // SZOOM_SYNTHETIC_H_
