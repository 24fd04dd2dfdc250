#include "szoom/fusion.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace szoom {
namespace {

std::map<std::string, ScalarMap> three(double m, double h, double f) {
  return {{"motion", ScalarMap(3, 2, m)},
          {"human", ScalarMap(3, 2, h)},
          {"face", ScalarMap(3, 2, f)}};
}

TEST(FusionWeights, DefaultsAndNormalization) {
  const auto d = FusionWeights::defaults();
  EXPECT_NEAR(d.at("motion"), 0.46, 1e-12);
  EXPECT_NEAR(d.at("human"), 0.53, 1e-12);
  EXPECT_NEAR(d.at("face"), 0.01, 1e-12);
  const FusionWeights w({{"a", 2.0}, {"b", 6.0}});
  EXPECT_DOUBLE_EQ(w.at("a"), 0.25);
  EXPECT_DOUBLE_EQ(w.at("b"), 0.75);
  EXPECT_THROW(w.at("c"), Error);
  EXPECT_THROW(FusionWeights({{"a", -1.0}}), Error);
  EXPECT_THROW(FusionWeights({{"a", 0.0}}), Error);
}

TEST(Fuse, AllOnesSumsToOne) {
  const ScalarMap s = fuse(three(1, 1, 1), FusionWeights::defaults());
  for (double v : s.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Fuse, SingleKind) {
  std::map<std::string, ScalarMap> obs = three(0, 0, 0);
  obs["motion"].set(1, 1, 1.0);
  const ScalarMap s = fuse(obs, FusionWeights::defaults());
  EXPECT_NEAR(s.at(1, 1), 0.46, 1e-12);
  EXPECT_EQ(s.at(0, 0), 0.0);
}

TEST(Fuse, CoDetectionOutranksSingleDetection) {
  const auto w = FusionWeights::defaults();
  const double all = fuse(three(1, 1, 1), w).at(0, 0);
  const double hm = fuse(three(1, 1, 0), w).at(0, 0);
  const double m = fuse(three(1, 0, 0), w).at(0, 0);
  EXPECT_NEAR(hm, 0.99, 1e-12);
  EXPECT_GT(all, hm);
  EXPECT_GT(hm, m);
}

TEST(Fuse, MonotoneInEachObservation) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto w = FusionWeights::defaults();
  for (int i = 0; i < 500; ++i) {
    const double m = u(rng), h = u(rng), f = u(rng), bump = u(rng) * (1 - h);
    EXPECT_LE(fuse(three(m, h, f), w).at(0, 0),
              fuse(three(m, h + bump, f), w).at(0, 0));
  }
}

TEST(Fuse, Errors) {
  auto obs = three(0, 0, 0);
  obs["vehicle"] = ScalarMap(3, 2);
  EXPECT_THROW(fuse(obs, FusionWeights::defaults()), Error);
  auto bad = three(0, 0, 0);
  bad["face"] = ScalarMap(2, 2);
  EXPECT_THROW(fuse(bad, FusionWeights::defaults()), Error);
}

TEST(Penalty, FreshApplicationPeaksAtOne) {
  // Odd-sized rect so the centre falls on a pixel centre.
  const Rect roi{20, 10, 21, 11};
  const PenaltyState s = apply_penalty_cycle(PenaltyState(64, 32, 0.3), roi);
  EXPECT_DOUBLE_EQ(s.map().at(30, 15), 1.0);
  ASSERT_EQ(s.history().size(), 1u);
  const PenaltyRecord& g = s.history()[0];
  EXPECT_DOUBLE_EQ(g.sigma_x, 10.5);
  EXPECT_DOUBLE_EQ(g.sigma_y, 5.5);
  EXPECT_DOUBLE_EQ(gaussian_at(g, g.mu_x + g.sigma_x, g.mu_y), std::exp(-0.5));
  EXPECT_NEAR(gaussian_at(g, g.mu_x + g.sigma_x, g.mu_y), 0.6065, 1e-4);
  // Map samples the same Gaussian at pixel centres.
  for (int y = 0; y < 32; y += 5) {
    for (int x = 0; x < 64; x += 7) {
      EXPECT_NEAR(s.map().at(x, y), gaussian_at(g, x + 0.5, y + 0.5), 1e-12);
    }
  }
}

TEST(Penalty, GeometricDecay) {
  const Rect roi{20, 20, 11, 11};
  PenaltyState s = apply_penalty_cycle(PenaltyState(200, 200, 0.3), roi);
  const Rect far{170, 170, 5, 5};
  for (int n = 1; n <= 10; ++n) {
    // Penalize somewhere far away; the first ROI is never reselected.
    s = apply_penalty_cycle(std::move(s), far);
    EXPECT_NEAR(s.map().at(25, 25), std::pow(0.3, n), 1e-9) << n;
  }
}

TEST(Penalty, TwoFarApartRois) {
  const Rect a{10, 10, 9, 9}, b{150, 150, 9, 9};
  PenaltyState s(200, 200, 0.3);
  s = apply_penalty_cycle(std::move(s), a);
  s = apply_penalty_cycle(std::move(s), b);
  const auto& h = s.history();
  const double at_a = 0.3 * gaussian_at(h[0], 14.5, 14.5) + gaussian_at(h[1], 14.5, 14.5);
  const double at_b = 0.3 * gaussian_at(h[0], 154.5, 154.5) + gaussian_at(h[1], 154.5, 154.5);
  EXPECT_NEAR(s.map().at(14, 14), at_a, 1e-12);
  EXPECT_NEAR(s.map().at(154, 154), std::min(1.0, at_b), 1e-12);
  EXPECT_NEAR(at_a, 0.3, 1e-9);
  EXPECT_NEAR(s.map().at(154, 154), 1.0, 1e-12);
}

TEST(Penalty, UpdateBoundedAndClamped) {
  std::mt19937 rng(10);
  std::uniform_int_distribution<int> xy(0, 50), wh(1, 30);
  PenaltyState s(60, 40, 0.7);
  for (int i = 0; i < 40; ++i) {
    const ScalarMap before = s.map();
    s = apply_penalty_cycle(std::move(s), {xy(rng), xy(rng) % 40, wh(rng), wh(rng)});
    for (std::size_t k = 0; k < before.size(); ++k) {
      EXPECT_LE(s.map().values()[k], 0.7 * before.values()[k] + 1.0 + 1e-12);
      EXPECT_LE(s.map().values()[k], 1.0);
      EXPECT_GE(s.map().values()[k], 0.0);
    }
  }
}

TEST(Penalty, RejectsBadAlpha) {
  EXPECT_THROW(PenaltyState(4, 4, 1.5), Error);
  EXPECT_THROW(PenaltyState(4, 4, -0.1), Error);
}

TEST(DecisionMap, IdentityWithoutPenaltyOrMask) {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarMap s(8, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) s.set(x, y, u(rng));
  EXPECT_EQ(decision_map(s, UserMask::all_relevant(8, 6), PenaltyState(8, 6)), s);
}

TEST(DecisionMap, MaskedRegionIsZero) {
  ScalarMap s(4, 4, 0.9);
  ScalarMap u(4, 4, 1.0);
  for (int y = 0; y < 4; ++y) u.set(0, y, 0.0);
  const ScalarMap d = decision_map(s, UserMask(u), PenaltyState(4, 4));
  for (int y = 0; y < 4; ++y) {
    EXPECT_EQ(d.at(0, y), 0.0);
    EXPECT_EQ(d.at(1, y), 0.9);
  }
}

TEST(DecisionMap, ProductOfTerms) {
  // 1x1 map; a 1x1 ROI puts the Gaussian peak (1.0) on the pixel centre, and
  // alpha = 0.3 decays it to 0.3 after one far-away cycle.
  PenaltyState p(1, 1, 0.3);
  p = apply_penalty_cycle(std::move(p), {0, 0, 1, 1});
  p = apply_penalty_cycle(std::move(p), {1000, 1000, 1, 1});
  ASSERT_NEAR(p.map().at(0, 0), 0.3, 1e-12);
  const ScalarMap d = decision_map(ScalarMap(1, 1, 0.8), UserMask::all_relevant(1, 1), p);
  EXPECT_NEAR(d.at(0, 0), 0.56, 1e-12);
}

TEST(DecisionMap, ShapeMismatch) {
  EXPECT_THROW(decision_map(ScalarMap(4, 4), UserMask::all_relevant(4, 3), PenaltyState(4, 4)),
               Error);
  EXPECT_THROW(decision_map(ScalarMap(4, 4), UserMask::all_relevant(4, 4), PenaltyState(5, 4)),
               Error);
}

TEST(UserMask, BinarizesNonzeroAndResizes) {
  const UserMask m(ScalarMap(2, 1, std::vector<double>{0.0, 0.2}));
  EXPECT_EQ(m.map().at(0, 0), 0.0);
  EXPECT_EQ(m.map().at(1, 0), 1.0);
  const UserMask big = m.resized(4, 2);
  EXPECT_EQ(big.map().total(), 4.0);
}

}  // namespace
}  // namespace szoom
