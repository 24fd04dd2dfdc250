#include "szoom/image_io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "test_util.h"

namespace szoom {
namespace {

using testing::TempDir;

Frame noise_frame(int w, int h, std::uint32_t seed) {
  Frame f(w, h);
  std::mt19937 rng(seed);
  for (auto& p : f.mutable_pixels()) p = static_cast<std::uint8_t>(rng());
  return f;
}

TEST(ImageIo, PpmAndPngRoundTrip) {
  TempDir dir("io");
  const Frame f = noise_frame(37, 21, 1);
  for (const char* name : {"a.ppm", "a.png"}) {
    write_image(dir / name, f);
    const Frame back = read_image(dir / name);
    EXPECT_EQ(back.width(), 37);
    EXPECT_EQ(back.height(), 21);
    EXPECT_TRUE(std::equal(f.pixels().begin(), f.pixels().end(), back.pixels().begin()))
        << name;
  }
}

TEST(ImageIo, GreyImagesReplicateChannels) {
  TempDir dir("grey");
  std::ofstream(dir / "g.pgm", std::ios::binary) << "P2\n# comment\n3 1\n255\n0 128 255\n";
  const Frame f = read_image(dir / "g.pgm");
  EXPECT_EQ(f.at(1, 0, 0), 128);
  EXPECT_EQ(f.at(1, 0, 2), 128);
  EXPECT_EQ(f.at(2, 0, 1), 255);
}

TEST(ImageIo, AsciiPpm) {
  TempDir dir("ascii");
  std::ofstream(dir / "c.ppm") << "P3 2 1 255\n1 2 3  4 5 6\n";
  const Frame f = read_image(dir / "c.ppm");
  EXPECT_EQ(f.at(0, 0, 2), 3);
  EXPECT_EQ(f.at(1, 0, 0), 4);
}

TEST(ImageIo, Errors) {
  TempDir dir("err");
  EXPECT_THROW(read_image(dir / "missing.ppm"), Error);
  std::ofstream(dir / "bad.ppm") << "P7\n";
  EXPECT_THROW(read_image(dir / "bad.ppm"), Error);
  std::ofstream(dir / "short.ppm", std::ios::binary) << "P6\n4 4\n255\nabc";
  EXPECT_THROW(read_image(dir / "short.ppm"), Error);
  EXPECT_THROW(write_image(dir / "x.bmp", Frame(2, 2)), Error);
}

TEST(ImageIo, BinaryMaskRoundTrip) {
  TempDir dir("mask");
  ScalarMap m(5, 4);
  m.set(1, 2, 1.0);
  m.set(4, 3, 1.0);
  for (const char* name : {"m.pgm", "m.png"}) {
    write_binary_mask(dir / name, m);
    EXPECT_EQ(read_binary_mask(dir / name), m) << name;
  }
}

TEST(ImageIo, NaturalOrder) {
  TempDir dir("order");
  for (const char* n : {"f10.ppm", "f2.ppm", "f1.ppm", "notes.txt", "f100.png"}) {
    if (std::string(n).ends_with(".txt")) {
      std::ofstream(dir / n) << "x";
    } else {
      write_image(dir / n, Frame(2, 2));
    }
  }
  const auto files = list_images(dir.path());
  ASSERT_EQ(files.size(), 4u);
  EXPECT_EQ(files[0].filename(), "f1.ppm");
  EXPECT_EQ(files[1].filename(), "f2.ppm");
  EXPECT_EQ(files[2].filename(), "f10.ppm");
  EXPECT_EQ(files[3].filename(), "f100.png");
}

TEST(FrameSource, DirectoryYieldsIndexedFrames) {
  TempDir dir("dirsrc");
  for (int i = 0; i < 3; ++i) {
    write_image(dir / ("img" + std::to_string(i) + ".ppm"), noise_frame(8, 6, i));
  }
  auto src = open_frame_source(dir.path());
  EXPECT_EQ(src->frame_count(), 3);
  EXPECT_EQ(src->width(), 8);
  EXPECT_FALSE(src->fps().has_value());
  for (int i = 0; i < 3; ++i) {
    auto f = src->next();
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->index(), i);
    const Frame want = noise_frame(8, 6, i);
    EXPECT_TRUE(std::equal(want.pixels().begin(), want.pixels().end(), f->pixels().begin()));
  }
  EXPECT_FALSE(src->next().has_value());
}

TEST(FrameSource, DirectoryRejectsSizeChange) {
  TempDir dir("dirsize");
  write_image(dir / "0.ppm", Frame(8, 6));
  write_image(dir / "1.ppm", Frame(9, 6));
  auto src = open_frame_source(dir.path());
  ASSERT_TRUE(src->next().has_value());
  EXPECT_THROW(src->next(), Error);
}

TEST(FrameSource, RawStreamRoundTrip) {
  TempDir dir("raw");
  {
    RawStreamWriter w(dir / "s.szraw", 10, 4, 25.0);
    for (int i = 0; i < 5; ++i) w.write(noise_frame(10, 4, 100 + i));
    EXPECT_THROW(w.write(Frame(3, 3)), Error);
  }
  auto src = open_frame_source(dir / "s.szraw");
  EXPECT_EQ(src->frame_count(), 5);
  ASSERT_TRUE(src->fps().has_value());
  EXPECT_DOUBLE_EQ(*src->fps(), 25.0);
  for (int i = 0; i < 5; ++i) {
    auto f = src->next();
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->index(), i);
    const Frame want = noise_frame(10, 4, 100 + i);
    EXPECT_TRUE(std::equal(want.pixels().begin(), want.pixels().end(), f->pixels().begin()));
  }
  EXPECT_FALSE(src->next().has_value());
}

TEST(FrameSource, RawStreamErrors) {
  TempDir dir("rawerr");
  std::ofstream(dir / "bad.szraw") << "NOPE 1 1 30\n";
  EXPECT_THROW(open_frame_source(dir / "bad.szraw"), Error);
  std::ofstream(dir / "partial.szraw", std::ios::binary) << "SZRAW 2 2 30\n" << std::string(13, 'x');
  EXPECT_THROW(open_frame_source(dir / "partial.szraw"), Error);
  EXPECT_THROW(open_frame_source(dir / "missing"), Error);
}

}  // namespace
}  // namespace szoom
