#include "szoom/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace szoom {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_image_ext(const std::string& ext) {
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

// Skips whitespace and '#' comments between PNM header tokens.
int read_pnm_int(std::istream& in, const fs::path& path) {
  int c = in.peek();
  while (c != EOF) {
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
    } else {
      break;
    }
    c = in.peek();
  }
  int v = -1;
  if (!(in >> v) || v < 0) {
    throw Error("malformed PNM header in '" + path.string() + "'");
  }
  return v;
}

Frame read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open image '" + path.string() + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' &&
                          magic[1] != '5' && magic[1] != '6')) {
    throw Error("unsupported PNM variant in '" + path.string() + "'");
  }
  const int w = read_pnm_int(in, path);
  const int h = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) {
    throw Error("unsupported PNM dimensions or depth in '" + path.string() + "'");
  }
  const bool grey = magic[1] == '2' || magic[1] == '5';
  const bool ascii = magic[1] == '2' || magic[1] == '3';
  const std::size_t channels = grey ? 1 : 3;
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  std::vector<std::uint8_t> raw(n);
  if (ascii) {
    for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<std::uint8_t>(read_pnm_int(in, path));
  } else {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n)) {
      throw Error("truncated PNM data in '" + path.string() + "'");
    }
  }
  if (maxval != 255) {
    for (auto& v : raw) v = static_cast<std::uint8_t>(v * 255 / maxval);
  }
  if (!grey) return Frame(w, h, std::move(raw));
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    rgb[i * 3] = rgb[i * 3 + 1] = rgb[i * 3 + 2] = raw[i];
  }
  return Frame(w, h, std::move(rgb));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Frame read_png(const fs::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open image '" + path.string() + "'");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("libpng initialisation failed");
  }
  // Everything with a destructor lives above setjmp.
  std::vector<std::uint8_t> rgb;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("cannot decode PNG '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  w = png_get_image_width(png, info);
  h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  rgb.resize(static_cast<std::size_t>(w) * h * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = &rgb[static_cast<std::size_t>(y) * w * 3];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return Frame(static_cast<int>(w), static_cast<int>(h), std::move(rgb));
}

void write_png(const fs::path& path, const Frame& frame) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot write image '" + path.string() + "'");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("cannot encode PNG '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, frame.width(), frame.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < frame.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(frame.pixel(0, y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Natural order: digit runs compare numerically.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const auto na = a.substr(i, ie - i).find_first_not_of('0');
      const auto nb = b.substr(j, je - j).find_first_not_of('0');
      const std::string da = na == std::string::npos ? "" : a.substr(i + na, ie - i - na);
      const std::string db = nb == std::string::npos ? "" : b.substr(j + nb, je - j - nb);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

}  // namespace

Frame read_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return read_pnm(path);
  throw Error("unsupported image format '" + path.string() + "'");
}

void write_image(const fs::path& path, const Frame& frame) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") {
    write_png(path, frame);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write image '" + path.string() + "'");
  if (ext == ".pgm") {
    out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
    std::vector<std::uint8_t> luma(static_cast<std::size_t>(frame.width()) *
                                   frame.height());
    const auto px = frame.pixels();
    for (std::size_t i = 0; i < luma.size(); ++i) {
      luma[i] = static_cast<std::uint8_t>(
          (299 * px[i * 3] + 587 * px[i * 3 + 1] + 114 * px[i * 3 + 2] + 500) /
          1000);
    }
    out.write(reinterpret_cast<const char*>(luma.data()),
              static_cast<std::streamsize>(luma.size()));
  } else if (ext == ".ppm" || ext == ".pnm") {
    out << "P6\n" << frame.width() << " " << frame.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels().data()),
              static_cast<std::streamsize>(frame.pixels().size()));
  } else {
    throw Error("unsupported image format '" + path.string() + "'");
  }
  if (!out) throw Error("failed writing image '" + path.string() + "'");
}

ScalarMap read_binary_mask(const fs::path& path) {
  const Frame img = read_image(path);
  ScalarMap out(img.width(), img.height());
  auto v = out.mutable_values();
  const auto px = img.pixels();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = (px[i * 3] | px[i * 3 + 1] | px[i * 3 + 2]) != 0 ? 1.0 : 0.0;
  }
  return out;
}

void write_binary_mask(const fs::path& path, const ScalarMap& map) {
  Frame img(map.width(), map.height());
  auto px = img.mutable_pixels();
  const auto v = map.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::uint8_t g = v[i] >= 0.5 ? 255 : 0;
    px[i * 3] = px[i * 3 + 1] = px[i * 3 + 2] = g;
  }
  write_image(path, img);
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error("'" + dir.string() + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_ext(lower_ext(entry.path()))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });
  return files;
}

DirectorySource::DirectorySource(const fs::path& dir) : files_(list_images(dir)) {
  if (files_.empty()) {
    throw Error("no image files in '" + dir.string() + "'");
  }
  const Frame first = read_image(files_.front());
  width_ = first.width();
  height_ = first.height();
}

std::optional<Frame> DirectorySource::next() {
  if (cursor_ >= files_.size()) return std::nullopt;
  Frame f = read_image(files_[cursor_]);
  if (f.width() != width_ || f.height() != height_) {
    throw Error("frame '" + files_[cursor_].string() + "' is " +
                std::to_string(f.width()) + "x" + std::to_string(f.height()) +
                ", expected " + std::to_string(width_) + "x" +
                std::to_string(height_));
  }
  f.set_index(static_cast<std::int64_t>(cursor_));
  ++cursor_;
  return f;
}

RawStreamSource::RawStreamSource(const fs::path& path)
    : in_(path, std::ios::binary) {
  if (!in_) throw Error("cannot open frame stream '" + path.string() + "'");
  std::string header;
  std::getline(in_, header);
  std::istringstream hs(header);
  std::string magic;
  if (!(hs >> magic >> width_ >> height_ >> fps_) || magic != "SZRAW" ||
      width_ < 1 || height_ < 1 || !(fps_ > 0.0)) {
    throw Error("'" + path.string() +
                "' is not a raw frame stream (expected 'SZRAW <w> <h> <fps>')");
  }
  const auto data_start = static_cast<std::uintmax_t>(in_.tellg());
  const std::uintmax_t bytes = fs::file_size(path) - data_start;
  const std::uintmax_t frame_bytes =
      static_cast<std::uintmax_t>(width_) * height_ * 3;
  if (bytes % frame_bytes != 0) {
    throw Error("frame stream '" + path.string() + "' ends with a partial frame");
  }
  count_ = static_cast<std::int64_t>(bytes / frame_bytes);
}

std::optional<Frame> RawStreamSource::next() {
  if (cursor_ >= count_) return std::nullopt;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width_) * height_ * 3);
  in_.read(reinterpret_cast<char*>(rgb.data()),
           static_cast<std::streamsize>(rgb.size()));
  if (in_.gcount() != static_cast<std::streamsize>(rgb.size())) {
    throw Error("short read in frame stream at frame " + std::to_string(cursor_));
  }
  return Frame(width_, height_, std::move(rgb), cursor_++);
}

RawStreamWriter::RawStreamWriter(const fs::path& path, int width, int height,
                                 double fps)
    : out_(path, std::ios::binary), width_(width), height_(height) {
  if (!out_) throw Error("cannot write frame stream '" + path.string() + "'");
  out_ << "SZRAW " << width << " " << height << " " << fps << "\n";
}

void RawStreamWriter::write(const Frame& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw Error("RawStreamWriter: frame size mismatch");
  }
  out_.write(reinterpret_cast<const char*>(frame.pixels().data()),
             static_cast<std::streamsize>(frame.pixels().size()));
  if (!out_) throw Error("RawStreamWriter: write failed");
}

std::unique_ptr<FrameSource> open_frame_source(const fs::path& path) {
  if (fs::is_directory(path)) return std::make_unique<DirectorySource>(path);
  if (fs::is_regular_file(path)) return std::make_unique<RawStreamSource>(path);
  throw Error("input '" + path.string() + "' does not exist");
}

}  // namespace szoom
