// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

namespace splat {
namespace {

float float_from_bytes(const unsigned char* p, bool little_endian) {
  std::uint32_t bits;
  if (little_endian)
    bits = static_cast<std::uint32_t>(p[0]) |
           static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 |
           static_cast<std::uint32_t>(p[3]) << 24;
  else
    bits = static_cast<std::uint32_t>(p[3]) |
           static_cast<std::uint32_t>(p[2]) << 8 |
           static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[0]) << 24;
  return std::bit_cast<float>(bits);
}

// RAII wrapper over C stdio so libpng error longjmps cannot leak handles.
struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// One PFM header token: skips whitespace and at most the one line break that
// terminates the previous token, as the format prescribes.
std::string pfm_token(const std::string& data, std::size_t& pos,
                      const std::string& path) {
  while (pos < data.size() &&
         (data[pos] == ' ' || data[pos] == '\t' || data[pos] == '\n' ||
          data[pos] == '\r'))
    ++pos;
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])))
    ++pos;
  if (start == pos)
    throw Error(path + ": malformed header, token expected at byte offset " +
                std::to_string(start));
  return data.substr(start, pos - start);
}

}  // namespace

Grid make_grid(int width, int height, double fill) {
  if (width <= 0 || height <= 0)
    throw Error("grid dimensions must be positive");
  return Grid{width, height,
              std::vector<double>(
                  static_cast<std::size_t>(width) * height, fill)};
}

Image make_image(int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error("image dimensions must be positive");
  return Image{width, height,
               std::vector<double>(
                   static_cast<std::size_t>(width) * height * 3, 0.0)};
}

DepthMapFile read_depth_pfm(const std::string& path,
                            ScaleConvention convention) {
  std::FILE* raw = std::fopen(path.c_str(), "rb");
  if (!raw) throw Error(path + ": cannot open file");
  FilePtr file(raw);
  std::string data;
  {
    char chunk[65536];
    std::size_t got = 0;
    while ((got = std::fread(chunk, 1, sizeof chunk, raw)) > 0)
      data.append(chunk, got);
  }

  std::size_t pos = 0;
  const std::string magic = pfm_token(data, pos, path);
  if (magic == "PF")
    throw Error(path + ": color PFM not supported, expected grayscale 'Pf'");
  if (magic != "Pf")
    throw Error(path + ": bad magic '" + magic + "', expected 'Pf'");

  auto parse_int = [&](const char* what) {
    const std::size_t at = pos;
    const std::string tok = pfm_token(data, pos, path);
    char* end = nullptr;
    const long value = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || value <= 0)
      throw Error(path + ": bad " + what + " '" + tok + "' at byte offset " +
                  std::to_string(at));
    return static_cast<int>(value);
  };
  const int width = parse_int("width");
  const int height = parse_int("height");
  const std::size_t scale_at = pos;
  const std::string scale_tok = pfm_token(data, pos, path);
  char* end = nullptr;
  const double scale = std::strtod(scale_tok.c_str(), &end);
  if (end != scale_tok.c_str() + scale_tok.size() || !std::isfinite(scale) ||
      scale == 0.0)
    throw Error(path + ": bad scale '" + scale_tok + "' at byte offset " +
                std::to_string(scale_at));
  // Exactly one whitespace byte separates the header from the payload.
  if (pos >= data.size() ||
      !std::isspace(static_cast<unsigned char>(data[pos])))
    throw Error(path + ": missing whitespace after scale at byte offset " +
                std::to_string(pos));
  ++pos;

  const bool little_endian = scale < 0.0;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (data.size() - pos < count * 4)
    throw Error(path + ": truncated payload, expected " +
                std::to_string(count * 4) + " bytes at byte offset " +
                std::to_string(pos) + " but only " +
                std::to_string(data.size() - pos) + " remain");

  DepthMapFile out;
  out.width = width;
  out.height = height;
  out.scale_convention = convention;
  out.values.resize(count);
  const unsigned char* payload =
      reinterpret_cast<const unsigned char*>(data.data()) + pos;
  for (int file_row = 0; file_row < height; ++file_row) {
    const int row = height - 1 - file_row;  // file stores bottom row first
    for (int col = 0; col < width; ++col) {
      const double value = static_cast<double>(float_from_bytes(
          payload + (static_cast<std::size_t>(file_row) * width + col) * 4,
          little_endian));
      if (!std::isfinite(value))
        throw Error(path + ": non-finite value at row " + std::to_string(row) +
                    ", column " + std::to_string(col));
      if (convention == ScaleConvention::kSceneAnchored && value < 0.0)
        throw Error(path + ": negative value " + std::to_string(value) +
                    " at row " + std::to_string(row) + ", column " +
                    std::to_string(col) +
                    " rejected for a scene-anchored depth map");
      out.values[static_cast<std::size_t>(row) * width + col] = value;
    }
  }
  return out;
}

void write_pfm(const Grid& grid, const std::string& path) {
  if (grid.width <= 0 || grid.height <= 0 ||
      grid.values.size() !=
          static_cast<std::size_t>(grid.width) * grid.height)
    throw Error("grid dimensions do not match its value count");
  std::string out = "Pf\n" + std::to_string(grid.width) + " " +
                    std::to_string(grid.height) + "\n-1.0\n";
  out.reserve(out.size() + grid.values.size() * 4);
  for (int file_row = 0; file_row < grid.height; ++file_row) {
    const int row = grid.height - 1 - file_row;
    for (int col = 0; col < grid.width; ++col) {
      const float value = static_cast<float>(grid.at(row, col));
      const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
      out.push_back(static_cast<char>(bits & 0xff));
      out.push_back(static_cast<char>((bits >> 8) & 0xff));
      out.push_back(static_cast<char>((bits >> 16) & 0xff));
      out.push_back(static_cast<char>((bits >> 24) & 0xff));
    }
  }
  std::FILE* raw = std::fopen(path.c_str(), "wb");
  if (!raw) throw Error(path + ": cannot open file for writing");
  FilePtr file(raw);
  if (std::fwrite(out.data(), 1, out.size(), raw) != out.size())
    throw Error(path + ": write failed");
}

namespace {

void write_png_bytes(const std::vector<std::uint8_t>& bytes, int width,
                     int height, int color_type, const std::string& path) {
  std::FILE* raw = std::fopen(path.c_str(), "wb");
  if (!raw) throw Error(path + ": cannot open file for writing");
  FilePtr file(raw);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(path + ": png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(path + ": png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(path + ": libpng write error");
  }
  png_init_io(png, raw);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  for (int row = 0; row < height; ++row)
    png_write_row(png, const_cast<png_bytep>(
                           bytes.data() +
                           static_cast<std::size_t>(row) * width * channels));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_rgb8(const Image& image, const std::string& path) {
  if (image.width <= 0 || image.height <= 0 ||
      image.rgb.size() !=
          static_cast<std::size_t>(image.width) * image.height * 3)
    throw Error("image dimensions do not match its value count");
  std::vector<std::uint8_t> bytes(image.rgb.size());
  for (std::size_t i = 0; i < image.rgb.size(); ++i) {
    const double v = std::clamp(image.rgb[i], 0.0, 1.0);
    bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  write_png_bytes(bytes, image.width, image.height, PNG_COLOR_TYPE_RGB, path);
}

void write_png_gray8(const std::vector<std::uint8_t>& pixels, int width,
                     int height, const std::string& path) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * height)
    throw Error("mask dimensions do not match the pixel count");
  write_png_bytes(pixels, width, height, PNG_COLOR_TYPE_GRAY, path);
}

Image read_png(const std::string& path) {
  std::FILE* raw = std::fopen(path.c_str(), "rb");
  if (!raw) throw Error(path + ": cannot open file");
  FilePtr file(raw);
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(path + ": png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(path + ": png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path + ": libpng read error (not a valid PNG?)");
  }
  png_init_io(png, raw);
  png_read_info(png, info);
  // Normalize every input variant to 8-bit RGB.
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_channels(png, info) != 3 || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path + ": unsupported PNG layout after normalization");
  }
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int row = 0; row < height; ++row)
    rows[static_cast<std::size_t>(row)] =
        bytes.data() + static_cast<std::size_t>(row) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image image = make_image(width, height);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    image.rgb[i] = bytes[i] / 255.0;
  return image;
}

Grid resample_bilinear(const Grid& grid, int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error("resample target dimensions must be positive");
  if (grid.width <= 0 || grid.height <= 0 ||
      grid.values.size() !=
          static_cast<std::size_t>(grid.width) * grid.height)
    throw Error("grid dimensions do not match its value count");
  if (width == grid.width && height == grid.height) return grid;

  Grid out = make_grid(width, height);
  const double sx = static_cast<double>(grid.width) / width;
  const double sy = static_cast<double>(grid.height) / height;
  for (int row = 0; row < height; ++row) {
    // Map the target pixel center into source pixel-center coordinates.
    const double fy = (row + 0.5) * sy - 0.5;
    const double cy = std::clamp(fy, 0.0, static_cast<double>(grid.height - 1));
    const int y0 = static_cast<int>(std::floor(cy));
    const int y1 = std::min(y0 + 1, grid.height - 1);
    const double wy = cy - y0;
    for (int col = 0; col < width; ++col) {
      const double fx = (col + 0.5) * sx - 0.5;
      const double cx =
          std::clamp(fx, 0.0, static_cast<double>(grid.width - 1));
      const int x0 = static_cast<int>(std::floor(cx));
      const int x1 = std::min(x0 + 1, grid.width - 1);
      const double wx = cx - x0;
      const double top =
          grid.at(y0, x0) * (1.0 - wx) + grid.at(y0, x1) * wx;
      const double bottom =
          grid.at(y1, x0) * (1.0 - wx) + grid.at(y1, x1) * wx;
      out.at(row, col) = top * (1.0 - wy) + bottom * wy;
    }
  }
  return out;
}

}  // namespace splat
