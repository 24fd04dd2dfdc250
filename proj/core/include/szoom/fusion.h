#ifndef SZOOM_FUSION_H_
#define SZOOM_FUSION_H_

#include <map>
#include <string>
#include <vector>

#include "szoom/geometry.h"

namespace szoom {

// Per-kind fusion coefficients, normalized to sum to 1 on construction.
class FusionWeights {
 public:
  // motion 0.46, human 0.53, face 0.01.
  static FusionWeights defaults();

  FusionWeights() = default;
  explicit FusionWeights(std::map<std::string, double> raw);

  bool has(const std::string& kind) const { return weights_.contains(kind); }
  double at(const std::string& kind) const;
  const std::map<std::string, double>& weights() const { return weights_; }
  std::vector<std::string> kinds() const;

 private:
  std::map<std::string, double> weights_;
};

// Sensitivity map: sum over kinds of weight * accumulated observation.
ScalarMap fuse(const std::map<std::string, ScalarMap>& observations,
               const FusionWeights& weights);

struct PenaltyRecord {
  int cycle = 0;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

// Peak-1 Gaussian of one penalty record evaluated at a point.
double gaussian_at(const PenaltyRecord& g, double x, double y);

// Running penalty over recently selected regions. Each cycle the map decays by
// alpha and gains an unnormalized (peak 1) Gaussian centred on the region,
// with sigma equal to half its width and height; values are clamped to [0, 1].
class PenaltyState {
 public:
  PenaltyState() = default;
  PenaltyState(int width, int height, double alpha = 0.3);

  const ScalarMap& map() const { return map_; }
  double alpha() const { return alpha_; }
  const std::vector<PenaltyRecord>& history() const { return history_; }
  int cycles_applied() const { return static_cast<int>(history_.size()); }

  friend PenaltyState apply_penalty_cycle(PenaltyState state,
                                          const Rect& selected);

 private:
  ScalarMap map_;
  double alpha_ = 0.3;
  std::vector<PenaltyRecord> history_;
};

// selected is the tracked region at the last frame of the finished cycle, in
// the penalty map's coordinates.
PenaltyState apply_penalty_cycle(PenaltyState state, const Rect& selected);

// Binary relevance mask; nonzero input pixels become 1.
class UserMask {
 public:
  UserMask() = default;
  explicit UserMask(ScalarMap map);
  static UserMask all_relevant(int width, int height);

  const ScalarMap& map() const { return map_; }
  // Nearest-neighbour resample to another grid.
  UserMask resized(int width, int height) const;

 private:
  ScalarMap map_;
};

// (1 - penalty) * (user * sensitivity), per pixel.
ScalarMap decision_map(const ScalarMap& sensitivity, const UserMask& user,
                       const PenaltyState& penalty);

}  // namespace szoom

#endif  // SZOOM_FUSION_H_
