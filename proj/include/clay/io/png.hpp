#pragma once

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "clay/error.hpp"
#include "clay/types.hpp"

namespace clay::io {

/// [0, 1] -> {0..255}: clamp, then round to nearest. No gamma transform.
inline std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

/// Interleaves a 3-channel color image with a 1-channel alpha image.
inline Image with_alpha(const Image& color, const Image& alpha) {
  if (color.channels != 3 || alpha.channels != 1 || color.width != alpha.width || color.height != alpha.height) {
    throw DomainError("with_alpha needs a 3-channel color and a matching 1-channel alpha image");
  }
  Image out(color.width, color.height, 4);
  for (int y = 0; y < color.height; ++y)
    for (int x = 0; x < color.width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = color.at(x, y, c);
      out.at(x, y, 3) = alpha.at(x, y);
    }
  return out;
}

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

}  // namespace detail

/// 8-bit gray, RGB or RGBA PNG depending on the channel count (1, 3, 4).
inline void write_png(const Image& img, const std::string& path) {
  const int color_type = [&] {
    switch (img.channels) {
      case 1: return PNG_COLOR_TYPE_GRAY;
      case 3: return PNG_COLOR_TYPE_RGB;
      case 4: return PNG_COLOR_TYPE_RGBA;
      default: throw DomainError("write_png supports 1, 3 or 4 channels");
    }
  }();
  if (img.width <= 0 || img.height <= 0) throw DomainError("write_png needs a non-empty image");
  std::vector<std::uint8_t> bytes(img.data.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(img.data[i]);

  std::unique_ptr<std::FILE, detail::FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed while writing '" + path + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  for (int y = 0; y < img.height; ++y) png_write_row(png, bytes.data() + y * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("error while writing '" + path + "'");
}

/// Decodes any PNG to 8-bit samples, expanded to gray, RGB or RGBA.
inline Image read_png(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG '" + path + "': " + image.message);
  }
  const bool alpha = image.format & PNG_FORMAT_FLAG_ALPHA;
  const bool color = image.format & PNG_FORMAT_FLAG_COLOR;
  image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    throw IoError("cannot decode PNG '" + path + "': " + image.message);
  }
  Image out(static_cast<int>(image.width), static_cast<int>(image.height),
            static_cast<int>(PNG_IMAGE_SAMPLE_CHANNELS(image.format)));
  for (std::size_t i = 0; i < buf.size(); ++i) out.data[i] = buf[i] / 255.0;
  return out;
}

}  // namespace clay::io
