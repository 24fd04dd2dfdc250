#include "szoom/contours.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <queue>
#include <random>

namespace szoom {
namespace {

BinaryMask random_mask(std::mt19937& rng, int w, int h, double p) {
  BinaryMask m(w, h);
  std::bernoulli_distribution on(p);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.set(x, y, on(rng));
  return m;
}

// Bounding boxes of 8-connected components by flood fill.
std::vector<Rect> component_boxes(const BinaryMask& m) {
  std::vector<Rect> boxes;
  std::vector<char> seen(static_cast<std::size_t>(m.width()) * m.height(), 0);
  for (int y0 = 0; y0 < m.height(); ++y0) {
    for (int x0 = 0; x0 < m.width(); ++x0) {
      if (!m.at(x0, y0) || seen[y0 * m.width() + x0]) continue;
      int minx = x0, maxx = x0, miny = y0, maxy = y0;
      std::queue<std::pair<int, int>> q;
      q.push({x0, y0});
      seen[y0 * m.width() + x0] = 1;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop();
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= m.width() || ny >= m.height()) continue;
            if (!m.at(nx, ny) || seen[ny * m.width() + nx]) continue;
            seen[ny * m.width() + nx] = 1;
            q.push({nx, ny});
          }
        }
      }
      boxes.push_back({minx, miny, maxx - minx + 1, maxy - miny + 1});
    }
  }
  return boxes;
}

void sort_boxes(std::vector<Rect>& v) {
  std::sort(v.begin(), v.end(), [](const Rect& a, const Rect& b) {
    return std::tie(a.y, a.x, a.w, a.h) < std::tie(b.y, b.x, b.w, b.h);
  });
}

TEST(Morphology, ErosionRemovesIsolatedPixel) {
  BinaryMask m(9, 9);
  m.set(4, 4, true);
  EXPECT_EQ(erode3x3(m).count(), 0);
}

TEST(Morphology, OpeningRestoresSolidBlock) {
  BinaryMask m(20, 20);
  m.fill_rect({5, 6, 7, 4});
  const BinaryMask eroded = erode3x3(m);
  EXPECT_EQ(eroded.count(), 5 * 2);
  EXPECT_EQ(dilate3x3(eroded), m);
}

TEST(Morphology, OutsidePixelsDoNotErodeBorder) {
  BinaryMask m(6, 4);
  m.fill_rect({0, 0, 6, 4});
  EXPECT_EQ(erode3x3(m), m);
}

TEST(Morphology, MatchesNeighbourhoodDefinition) {
  std::mt19937 rng(2);
  const BinaryMask m = random_mask(rng, 23, 17, 0.6);
  const BinaryMask e = erode3x3(m);
  const BinaryMask d = dilate3x3(m);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true, any = false;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= m.width() || ny >= m.height()) continue;
          all = all && m.at(nx, ny);
          any = any || m.at(nx, ny);
        }
      }
      EXPECT_EQ(e.at(x, y), all) << x << "," << y;
      EXPECT_EQ(d.at(x, y), any) << x << "," << y;
    }
  }
}

TEST(BorderFollowing, EmptyMaskHasNoBorders) {
  EXPECT_TRUE(outer_border_boxes(BinaryMask(10, 10)).empty());
}

TEST(BorderFollowing, SinglePixelAndBlocks) {
  BinaryMask m(30, 20);
  m.set(0, 0, true);
  m.fill_rect({10, 5, 6, 4});
  m.fill_rect({25, 15, 5, 5});
  auto boxes = outer_border_boxes(m);
  sort_boxes(boxes);
  ASSERT_EQ(boxes.size(), 3u);
  EXPECT_EQ(boxes[0], (Rect{0, 0, 1, 1}));
  EXPECT_EQ(boxes[1], (Rect{10, 5, 6, 4}));
  EXPECT_EQ(boxes[2], (Rect{25, 15, 5, 5}));
}

TEST(BorderFollowing, DiagonalTouchIsConnected) {
  BinaryMask m(6, 6);
  m.set(1, 1, true);
  m.set(2, 2, true);
  m.set(3, 3, true);
  const auto boxes = outer_border_boxes(m);
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes[0], (Rect{1, 1, 3, 3}));
}

TEST(BorderFollowing, RingWithIslandGivesTwoOuterBorders) {
  BinaryMask m(15, 15);
  m.fill_rect({1, 1, 13, 13});
  BinaryMask hole(15, 15);
  for (int y = 3; y < 12; ++y)
    for (int x = 3; x < 12; ++x) m.set(x, y, false);
  m.fill_rect({6, 6, 3, 3});
  auto boxes = outer_border_boxes(m);
  sort_boxes(boxes);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[0], (Rect{1, 1, 13, 13}));
  EXPECT_EQ(boxes[1], (Rect{6, 6, 3, 3}));
}

TEST(BorderFollowing, MatchesFloodFillOnRandomMasks) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> dim(1, 40);
    std::uniform_real_distribution<double> density(0.05, 0.7);
    const BinaryMask m = random_mask(rng, dim(rng), dim(rng), density(rng));
    auto got = outer_border_boxes(m);
    auto want = component_boxes(m);
    sort_boxes(got);
    sort_boxes(want);
    ASSERT_EQ(got, want) << "trial " << trial;
  }
}

TEST(BinaryMask, ThresholdAndBack) {
  ScalarMap s(3, 1, std::vector<double>{0.1, 0.2, 0.9});
  const BinaryMask b = BinaryMask::threshold(s, 0.2);
  EXPECT_FALSE(b.at(0, 0));
  EXPECT_TRUE(b.at(1, 0));
  EXPECT_TRUE(b.at(2, 0));
  EXPECT_EQ(b.to_map().total(), 2.0);
}

}  // namespace
}  // namespace szoom
