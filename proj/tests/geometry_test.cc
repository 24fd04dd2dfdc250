#include "szoom/geometry.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

namespace szoom {
namespace {

// round(p / q) with halves going up, in exact integer arithmetic (q > 0).
std::int64_t rational_round(std::int64_t p, std::int64_t q) {
  const std::int64_t n = 2 * p + q;
  const std::int64_t d = 2 * q;
  return n >= 0 ? n / d : -((-n + d - 1) / d);
}

TEST(RoundHalfUp, Halves) {
  EXPECT_EQ(round_half_up(0.5), 1);
  EXPECT_EQ(round_half_up(1.5), 2);
  EXPECT_EQ(round_half_up(-0.5), 0);
  EXPECT_EQ(round_half_up(-1.5), -1);
  EXPECT_EQ(round_half_up(2.4999), 2);
  EXPECT_EQ(round_half_up(-2.6), -3);
}

TEST(ClampRect, AlreadyInside) {
  EXPECT_EQ(clamp_rect({10, 10, 50, 50}, 100, 100), (Rect{10, 10, 50, 50}));
}

TEST(ClampRect, TranslatesFirst) {
  EXPECT_EQ(clamp_rect({-5, 0, 50, 50}, 100, 100), (Rect{0, 0, 50, 50}));
  EXPECT_EQ(clamp_rect({80, 70, 50, 50}, 100, 100), (Rect{50, 50, 50, 50}));
}

TEST(ClampRect, ShrinksOversizeDimensionOnly) {
  EXPECT_EQ(clamp_rect({0, 0, 200, 50}, 100, 100), (Rect{0, 0, 100, 50}));
}

TEST(ClampRect, IdempotentAndInside) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pos(-300, 300), size(1, 400), frame(1, 250);
  for (int i = 0; i < 5000; ++i) {
    const int fw = frame(rng), fh = frame(rng);
    const Rect r{pos(rng), pos(rng), size(rng), size(rng)};
    const Rect c = clamp_rect(r, fw, fh);
    EXPECT_EQ(clamp_rect(c, fw, fh), c);
    EXPECT_GE(c.x, 0);
    EXPECT_GE(c.y, 0);
    EXPECT_LE(c.right(), fw);
    EXPECT_LE(c.bottom(), fh);
    EXPECT_EQ(c.w, std::min(r.w, fw));
    EXPECT_EQ(c.h, std::min(r.h, fh));
  }
}

TEST(AdjustAspect, WidensSymmetricallyAboutCentre) {
  // 90 * 16/9 = 160: 70 extra columns, 35 on each side of the square.
  EXPECT_EQ(adjust_aspect({100, 100, 90, 90}, 16.0 / 9.0, 1920, 1080),
            (Rect{65, 100, 160, 90}));
}

TEST(AdjustAspect, IdentityWhenRatioMatches) {
  const Rect r{40, 30, 160, 90};
  EXPECT_EQ(adjust_aspect(r, 16.0 / 9.0, 1920, 1080), r);
}

TEST(AdjustAspect, TopEdgeGrowthGoesDown) {
  const Rect r{0, 0, 160, 45};
  const double phi = 16.0 / 9.0;
  const Rect got = adjust_aspect(r, phi, 1920, 1080);
  EXPECT_EQ(got, (Rect{0, 0, 160, 90}));

  // Brute force: the smallest rectangle inside the frame that contains r and
  // has the target ratio to within rounding.
  Rect best{};
  std::int64_t best_area = -1;
  for (int h = r.h; h <= 200; ++h) {
    for (int w = r.w; w <= 400; ++w) {
      if (std::abs(w - phi * h) > 0.5) continue;
      for (int y = 0; y + h <= 1080 && y <= r.y; ++y) {
        for (int x = 0; x + w <= 1920 && x <= r.x; ++x) {
          const Rect c{x, y, w, h};
          if (!c.contains(r)) continue;
          if (best_area < 0 || c.area() < best_area) {
            best = c;
            best_area = c.area();
          }
        }
      }
    }
  }
  EXPECT_EQ(got, best);
}

TEST(AdjustAspect, RatioWithinRoundingForRandomRects) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> frame(40, 400);
  std::uniform_real_distribution<double> aspect(0.3, 3.0);
  for (int i = 0; i < 5000; ++i) {
    const int fw = frame(rng), fh = frame(rng);
    const double phi = aspect(rng);
    std::uniform_int_distribution<int> wd(1, fw), hd(1, fh);
    const int w = wd(rng), h = hd(rng);
    std::uniform_int_distribution<int> xd(0, fw - w), yd(0, fh - h);
    const Rect r{xd(rng), yd(rng), w, h};
    const Rect a = adjust_aspect(r, phi, fw, fh);

    EXPECT_GE(a.x, 0);
    EXPECT_GE(a.y, 0);
    EXPECT_LE(a.right(), fw);
    EXPECT_LE(a.bottom(), fh);
    EXPECT_LE(std::abs(static_cast<double>(a.w) / a.h - phi),
              std::max(1.0 / a.h, 1.0 / a.w) + 1e-12)
        << to_string(r) << " phi " << phi << " -> " << to_string(a);

    if (a.w >= r.w && a.h >= r.h) {
      // Nothing had to be cut: the content is preserved and only one side grew
      // beyond rounding. Growing the height by whole pixels moves the width by
      // at most ceil(phi).
      EXPECT_TRUE(a.contains(r)) << to_string(r) << " -> " << to_string(a);
      EXPECT_TRUE(a.w <= r.w + std::ceil(phi) || a.h == r.h)
          << to_string(r) << " phi " << phi << " -> " << to_string(a);
    } else {
      // Only a frame too small for the grown side may cut content; the result
      // then fills the limiting frame side up to one step of the other side.
      EXPECT_TRUE(a.w + std::ceil(phi) + 1 >= fw || a.h + std::ceil(1 / phi) + 1 >= fh)
          << to_string(r) << " phi " << phi << " -> " << to_string(a) << " in " << fw << "x"
          << fh;
    }
  }
}

TEST(AdjustAspect, RejectsNonPositiveAspect) {
  EXPECT_THROW(adjust_aspect({0, 0, 10, 10}, 0.0, 100, 100), Error);
}

TEST(ScaleRect, Examples) {
  EXPECT_EQ(scale_rect({10, 10, 20, 20}, 2.0), (Rect{20, 20, 40, 40}));
  EXPECT_EQ(scale_rect({3, 3, 5, 5}, 1.0), (Rect{3, 3, 5, 5}));
  EXPECT_EQ(scale_rect({7, 9, 11, 13}, 1.0 / 0.6), (Rect{12, 15, 18, 22}));
}

TEST(ScaleRect, MatchesRationalArithmetic) {
  // factor = num / den exactly.
  const std::pair<int, int> factors[] = {{5, 3}, {3, 5}, {4, 5}, {5, 4}, {1, 2}, {7, 2}};
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> v(0, 3000), s(1, 3000);
  for (auto [num, den] : factors) {
    for (int i = 0; i < 2000; ++i) {
      const Rect r{v(rng), v(rng), s(rng), s(rng)};
      const Rect got = scale_rect(r, static_cast<double>(num) / den);
      EXPECT_EQ(got.x, rational_round(static_cast<std::int64_t>(r.x) * num, den));
      EXPECT_EQ(got.y, rational_round(static_cast<std::int64_t>(r.y) * num, den));
      EXPECT_EQ(got.w, std::max<std::int64_t>(
                           1, rational_round(static_cast<std::int64_t>(r.w) * num, den)));
      EXPECT_EQ(got.h, std::max<std::int64_t>(
                           1, rational_round(static_cast<std::int64_t>(r.h) * num, den)));
    }
  }
}

TEST(ScaleRect, RoundTripWithinOnePixel) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> v(0, 2000), s(2, 2000);
  std::uniform_real_distribution<double> f(0.5, 4.0);
  for (int i = 0; i < 5000; ++i) {
    const Rect r{v(rng), v(rng), s(rng), s(rng)};
    const double k = f(rng);
    const Rect back = scale_rect(scale_rect(r, k), 1.0 / k);
    EXPECT_LE(std::abs(back.x - r.x), 1);
    EXPECT_LE(std::abs(back.y - r.y), 1);
    EXPECT_LE(std::abs(back.w - r.w), 1);
    EXPECT_LE(std::abs(back.h - r.h), 1);
  }
}

TEST(ScaleRect, SizeFlooredAtOne) {
  EXPECT_EQ(scale_rect({0, 0, 1, 1}, 0.1), (Rect{0, 0, 1, 1}));
}

TEST(RectHelpers, GapAndIou) {
  EXPECT_EQ(gap({0, 0, 10, 10}, {13, 0, 5, 5}), 3);
  EXPECT_EQ(gap({0, 0, 10, 10}, {10, 10, 5, 5}), 0);
  EXPECT_EQ(gap({0, 0, 10, 10}, {15, 30, 5, 5}), 20);
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {5, 0, 10, 10}), 50.0 / 150.0);
  EXPECT_EQ(bounding_union({0, 0, 2, 2}, {5, 6, 1, 1}), (Rect{0, 0, 6, 7}));
}

TEST(ScalarMap, ValuesClampedIntoUnitRange) {
  ScalarMap m(2, 2, std::vector<double>{-1.0, 0.25, 1.5, 1.0});
  EXPECT_EQ(m.at(0, 0), 0.0);
  EXPECT_EQ(m.at(1, 0), 0.25);
  EXPECT_EQ(m.at(0, 1), 1.0);
  m.set(1, 1, 7.0);
  EXPECT_EQ(m.at(1, 1), 1.0);
  EXPECT_EQ(ScalarMap(3, 3, 2.0).total(), 9.0);
}

TEST(ScalarMap, RejectsWrongValueCount) {
  EXPECT_THROW(ScalarMap(2, 2, std::vector<double>(3, 0.0)), Error);
}

TEST(ScalarMap, SumClipsRect) {
  ScalarMap m(4, 4, 0.5);
  EXPECT_DOUBLE_EQ(m.sum({-2, -2, 4, 4}), 2.0);
  EXPECT_DOUBLE_EQ(m.sum({0, 0, 4, 4}), 8.0);
}

TEST(ScalarMap, NearestResize) {
  ScalarMap m(2, 1, std::vector<double>{0.0, 1.0});
  const ScalarMap big = m.resized_nearest(4, 2);
  EXPECT_EQ(big.at(0, 0), 0.0);
  EXPECT_EQ(big.at(1, 1), 0.0);
  EXPECT_EQ(big.at(2, 0), 1.0);
  EXPECT_EQ(big.at(3, 1), 1.0);
}

TEST(ResampleBilinear, SameSizeIsIdentity) {
  Frame f(7, 5);
  std::mt19937 rng(1);
  for (auto& p : f.mutable_pixels()) p = static_cast<std::uint8_t>(rng());
  EXPECT_EQ(resample_bilinear(f, 0, 0, 7, 5, 7, 5).pixels().size(), f.pixels().size());
  EXPECT_TRUE(std::equal(f.pixels().begin(), f.pixels().end(),
                         resample_bilinear(f, 0, 0, 7, 5, 7, 5).pixels().begin()));
}

TEST(DownscaleArea, AveragesBlocks) {
  Frame f(4, 2);
  f.fill_rect({0, 0, 2, 2}, 10, 20, 30);
  f.fill_rect({2, 0, 2, 2}, 30, 40, 50);
  const Frame d = downscale_area(f, 2, 1);
  EXPECT_EQ(d.at(0, 0, 0), 10);
  EXPECT_EQ(d.at(1, 0, 2), 50);
  const Frame one = downscale_area(f, 1, 1);
  EXPECT_EQ(one.at(0, 0, 1), 30);
}

TEST(DownscaleArea, ReusedBufferMatchesFresh) {
  std::mt19937 rng(5);
  Frame a(40, 30), b(40, 30, 9);
  for (auto& p : a.mutable_pixels()) p = static_cast<std::uint8_t>(rng());
  for (auto& p : b.mutable_pixels()) p = static_cast<std::uint8_t>(rng());
  Frame out;
  downscale_area(a, 24, 18, out);
  EXPECT_EQ(out, downscale_area(a, 24, 18));
  downscale_area(b, 24, 18, out);
  EXPECT_EQ(out, downscale_area(b, 24, 18));
  EXPECT_EQ(out.index(), 9);
  downscale_area(b, 40, 30, out);
  EXPECT_EQ(out, b);
}

TEST(Downscale, MatchesExactBoxFilter) {
  std::mt19937 rng(23);
  Frame f(97, 61);
  for (auto& p : f.mutable_pixels()) p = static_cast<std::uint8_t>(rng());
  for (const auto& [ow, oh] : {std::pair{58, 37}, std::pair{31, 20}, std::pair{96, 60}}) {
    const Frame d = downscale_area(f, ow, oh);
    const double rx = 97.0 / ow, ry = 61.0 / oh;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        for (int c = 0; c < 3; ++c) {
          // Integrate the piecewise-constant source over the output cell.
          double acc = 0.0;
          for (int sy = 0; sy < 61; ++sy) {
            const double hy = std::min((y + 1) * ry, sy + 1.0) - std::max(y * ry, 1.0 * sy);
            if (hy <= 0) continue;
            for (int sx = 0; sx < 97; ++sx) {
              const double hx = std::min((x + 1) * rx, sx + 1.0) - std::max(x * rx, 1.0 * sx);
              if (hx > 0) acc += hx * hy * f.at(sx, sy, c);
            }
          }
          // 8-bit vertical weights: at most 255 * 3 * 2^-9 off before the
          // final rounding.
          ASSERT_NEAR(d.at(x, y, c), acc / (rx * ry), 0.5 + 255.0 * 3 / 512) << x << "," << y;
        }
      }
    }
  }
}

}  // namespace
}  // namespace szoom
