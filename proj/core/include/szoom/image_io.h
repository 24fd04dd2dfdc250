#ifndef SZOOM_IMAGE_IO_H_
#define SZOOM_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "szoom/geometry.h"

namespace szoom {

// Reads PPM/PGM (binary P5/P6 or ASCII P2/P3) or PNG into RGB. Grey images
// are replicated over the three channels.
Frame read_image(const std::filesystem::path& path);
// Format from the extension: .ppm, .pgm (luma) or .png.
void write_image(const std::filesystem::path& path, const Frame& frame);

// Single-channel 8-bit image as a binary map: nonzero -> 1. Colour inputs
// count a pixel as set when any channel is nonzero.
ScalarMap read_binary_mask(const std::filesystem::path& path);
void write_binary_mask(const std::filesystem::path& path, const ScalarMap& map);

// Sequential source of input frames with a known length.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual std::int64_t frame_count() const = 0;
  // Frame rate carried by the container, if any.
  virtual std::optional<double> fps() const { return std::nullopt; }
  // Next frame, or nullopt at the end. Frame indices start at 0.
  virtual std::optional<Frame> next() = 0;
};

// Numbered image files in a directory, in natural filename order.
class DirectorySource : public FrameSource {
 public:
  explicit DirectorySource(const std::filesystem::path& dir);
  int width() const override { return width_; }
  int height() const override { return height_; }
  std::int64_t frame_count() const override {
    return static_cast<std::int64_t>(files_.size());
  }
  std::optional<Frame> next() override;

  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
  std::size_t cursor_ = 0;
  int width_ = 0;
  int height_ = 0;
};

// Raw stream: one ASCII header line "SZRAW <width> <height> <fps>\n" followed
// by interleaved 8-bit RGB frames, row-major, no padding.
class RawStreamSource : public FrameSource {
 public:
  explicit RawStreamSource(const std::filesystem::path& path);
  int width() const override { return width_; }
  int height() const override { return height_; }
  std::int64_t frame_count() const override { return count_; }
  std::optional<double> fps() const override { return fps_; }
  std::optional<Frame> next() override;

 private:
  std::ifstream in_;
  int width_ = 0;
  int height_ = 0;
  double fps_ = 0.0;
  std::int64_t count_ = 0;
  std::int64_t cursor_ = 0;
};

class RawStreamWriter {
 public:
  RawStreamWriter(const std::filesystem::path& path, int width, int height,
                  double fps);
  void write(const Frame& frame);

 private:
  std::ofstream out_;
  int width_;
  int height_;
};

// Directory -> DirectorySource, regular file -> RawStreamSource.
std::unique_ptr<FrameSource> open_frame_source(const std::filesystem::path& path);

// Image files of a directory in natural order (digit runs compare by value).
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace szoom

#endif  // SZOOM_IMAGE_IO_H_
