#include "protrack/png_io.hpp"

#include "protrack/errors.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace protrack {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const char* what) {
  throw IoError(std::string(what) + ": " + path.string());
}

}  // namespace

int quantize8(double v) {
  const double scaled = v * 255.0;
  return static_cast<int>(scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5));
}

LoadedPng read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) fail(path, "cannot open image");

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8))
    fail(path, "not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt PNG");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  // Normalize exotic layouts to 8/16-bit gray or RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // little-endian rows
  png_read_update_info(png, info);

  const int out_depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) fail(path, "unsupported channel count in PNG");

  const size_t row_bytes = png_get_rowbytes(png, info);
  std::vector<png_byte> data(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  LoadedPng out;
  out.bit_depth = out_depth;
  out.image = Image(static_cast<Index>(height), static_cast<Index>(width), channels);
  const double scale = out_depth == 16 ? 65535.0 : 255.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_bytep row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double v;
        if (out_depth == 16) {
          const png_uint_16* row16 = reinterpret_cast<const png_uint_16*>(row);
          v = row16[x * channels + c];
        } else {
          v = row[x * channels + c];
        }
        out.image.at(static_cast<Index>(y), static_cast<Index>(x), c) = v / scale;
      }
    }
  }
  return out;
}

namespace {

void write_png(const std::filesystem::path& path, const Image& img, int bit_depth) {
  const int channels = img.channels();
  if (bit_depth == 16 && channels != 1)
    throw std::invalid_argument("16-bit PNG output is single-channel only");

  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) fail(path, "cannot write image");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "PNG write failed");
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()),
               bit_depth, channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);

  const size_t row_elems = static_cast<size_t>(img.width()) * channels;
  if (bit_depth == 8) {
    std::vector<png_byte> row(row_elems);
    for (Index y = 0; y < img.height(); ++y) {
      for (Index x = 0; x < img.width(); ++x)
        for (int c = 0; c < channels; ++c)
          row[static_cast<size_t>(x) * channels + c] =
              static_cast<png_byte>(std::clamp(quantize8(img.at(y, x, c)), 0, 255));
      png_write_row(png, row.data());
    }
  } else {
    std::vector<png_uint_16> row(row_elems);
    for (Index y = 0; y < img.height(); ++y) {
      for (Index x = 0; x < img.width(); ++x) {
        const double scaled = img.at(y, x, 0) * 65535.0;
        const double q = scaled >= 0.0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5);
        row[static_cast<size_t>(x)] = static_cast<png_uint_16>(std::clamp(q, 0.0, 65535.0));
      }
      png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png8(const std::filesystem::path& path, const Image& img) { write_png(path, img, 8); }

void write_png16(const std::filesystem::path& path, const Image& img) { write_png(path, img, 16); }

}  // namespace protrack
