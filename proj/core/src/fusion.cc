#include "szoom/fusion.h"

#include <algorithm>
#include <cmath>

namespace szoom {

FusionWeights FusionWeights::defaults() {
  return FusionWeights({{"motion", 0.46}, {"human", 0.53}, {"face", 0.01}});
}

FusionWeights::FusionWeights(std::map<std::string, double> raw)
    : weights_(std::move(raw)) {
  double total = 0.0;
  for (const auto& [kind, c] : weights_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error("fusion weight for '" + kind + "' must be finite and >= 0");
    }
    total += c;
  }
  if (weights_.empty() || !(total > 0.0)) {
    throw Error("fusion weights must have a positive sum");
  }
  for (auto& [kind, c] : weights_) c /= total;
}

double FusionWeights::at(const std::string& kind) const {
  const auto it = weights_.find(kind);
  if (it == weights_.end()) {
    throw Error("no fusion weight for observation kind '" + kind + "'");
  }
  return it->second;
}

std::vector<std::string> FusionWeights::kinds() const {
  std::vector<std::string> out;
  for (const auto& [kind, c] : weights_) out.push_back(kind);
  return out;
}

ScalarMap fuse(const std::map<std::string, ScalarMap>& observations,
               const FusionWeights& weights) {
  if (observations.empty()) throw Error("fuse: no observations");
  const ScalarMap& first = observations.begin()->second;
  std::vector<double> acc(first.size(), 0.0);
  for (const auto& [kind, obs] : observations) {
    const double c = weights.at(kind);
    require_same_shape(first, obs, "fuse");
    const auto v = obs.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
  }
  return ScalarMap(first.width(), first.height(), std::move(acc));
}

double gaussian_at(const PenaltyRecord& g, double x, double y) {
  const double dx = (x - g.mu_x) / g.sigma_x;
  const double dy = (y - g.mu_y) / g.sigma_y;
  return std::exp(-0.5 * (dx * dx + dy * dy));
}

PenaltyState::PenaltyState(int width, int height, double alpha)
    : map_(width, height, 0.0), alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error("penalty decay alpha must lie in [0, 1]");
  }
}

PenaltyState apply_penalty_cycle(PenaltyState state, const Rect& selected) {
  const PenaltyRecord g{state.cycles_applied(), selected.center_x(),
                        selected.center_y(), selected.w / 2.0,
                        selected.h / 2.0};
  const int w = state.map_.width();
  const int h = state.map_.height();

  // Separable; evaluated at pixel centres.
  std::vector<double> gx(w);
  std::vector<double> gy(h);
  for (int x = 0; x < w; ++x) {
    const double d = (x + 0.5 - g.mu_x) / g.sigma_x;
    gx[x] = std::exp(-0.5 * d * d);
  }
  for (int y = 0; y < h; ++y) {
    const double d = (y + 0.5 - g.mu_y) / g.sigma_y;
    gy[y] = std::exp(-0.5 * d * d);
  }
  auto v = state.map_.mutable_values();
  for (int y = 0; y < h; ++y) {
    double* row = &v[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      row[x] = std::min(1.0, state.alpha_ * row[x] + gy[y] * gx[x]);
    }
  }
  state.history_.push_back(g);
  return state;
}

UserMask::UserMask(ScalarMap map) : map_(std::move(map)) {
  for (double& v : map_.mutable_values()) v = v > 0.0 ? 1.0 : 0.0;
}

UserMask UserMask::all_relevant(int width, int height) {
  return UserMask(ScalarMap(width, height, 1.0));
}

UserMask UserMask::resized(int width, int height) const {
  return UserMask(map_.resized_nearest(width, height));
}

ScalarMap decision_map(const ScalarMap& sensitivity, const UserMask& user,
                       const PenaltyState& penalty) {
  require_same_shape(sensitivity, user.map(), "decision_map (user mask)");
  require_same_shape(sensitivity, penalty.map(), "decision_map (penalty)");
  const auto s = sensitivity.values();
  const auto u = user.map().values();
  const auto p = penalty.map().values();
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = (1.0 - p[i]) * (u[i] * s[i]);
  return ScalarMap(sensitivity.width(), sensitivity.height(), std::move(out));
}

}  // namespace szoom
