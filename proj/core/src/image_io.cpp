// Copyright 2026 The HOT Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hot/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "hot/errors.hpp"

namespace hot {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr Open(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) {
    throw IoError("cannot open " + path.string() +
                  (mode[0] == 'r' ? " for reading" : " for writing"));
  }
  return f;
}

[[noreturn]] void PngError(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

// Decoded PNG in one of two normalized layouts.
struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 (gray) or 3 (rgb)
  int bit_depth = 8;  // 8 or 16
  std::vector<png_byte> data;
};

Decoded DecodePng(const std::filesystem::path& path, bool want_rgb) {
  FilePtr file = Open(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + ": not a PNG file");
  }
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           PngError, PngWarning);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: out of memory");
  }
  Decoded out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": " + (error.empty() ? "corrupt PNG" : error));
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  const bool is_color = (color & PNG_COLOR_MASK_COLOR) != 0;
  if (!want_rgb && is_color) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": expected a grayscale PNG");
  }
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (!is_color && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  if (want_rgb) {
    if (depth == 16) png_set_strip_16(png);
    if (!is_color) png_set_gray_to_rgb(png);
    out.bit_depth = 8;
  } else {
    out.bit_depth = depth == 16 ? 16 : 8;
    if (depth == 16) png_set_swap(png);  // host order for uint16 copies
  }
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.data.resize(stride * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) {
    rows[y] = out.data.data() + stride * static_cast<std::size_t>(y);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void EncodePng(const std::filesystem::path& path, int width, int height,
               int color_type, int bit_depth, const png_byte* data,
               std::size_t stride) {
  if (width < 1 || height < 1) throw IoError("cannot write an empty image");
  FilePtr file = Open(path, "wb");
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            PngError, PngWarning);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: out of memory");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + (error.empty() ? "write failed" : error));
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + stride * static_cast<std::size_t>(y));
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void CheckGray(const GrayImage& image) {
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw IoError("gray image bit depth must be 8 or 16");
  }
  if (image.width < 1 || image.height < 1 ||
      image.samples.size() != static_cast<std::size_t>(image.width) *
                                  static_cast<std::size_t>(image.height)) {
    throw IoError("gray image size does not match its samples");
  }
}

// Next whitespace-separated header token, skipping '#' comments.
std::string PnmToken(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long PnmNumber(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = PnmToken(in);
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  Decoded d = DecodePng(path, true);
  RgbImage img;
  img.width = d.width;
  img.height = d.height;
  img.pixels = std::move(d.data);
  return img;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  if (image.pixels.size() != 3 * image.pixel_count()) {
    throw IoError("RGB image size does not match its pixels");
  }
  EncodePng(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8,
            image.pixels.data(), 3 * static_cast<std::size_t>(image.width));
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  const Decoded d = DecodePng(path, false);
  GrayImage img;
  img.width = d.width;
  img.height = d.height;
  img.bit_depth = d.bit_depth;
  const std::size_t count =
      static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.height);
  img.samples.resize(count);
  if (d.bit_depth == 16) {
    std::memcpy(img.samples.data(), d.data.data(), 2 * count);
  } else {
    for (std::size_t p = 0; p < count; ++p) img.samples[p] = d.data[p];
  }
  return img;
}

void write_png_gray(const std::filesystem::path& path, const GrayImage& image) {
  CheckGray(image);
  std::vector<png_byte> buf;
  const std::size_t count = image.samples.size();
  if (image.bit_depth == 16) {
    buf.resize(2 * count);
    std::memcpy(buf.data(), image.samples.data(), 2 * count);
  } else {
    buf.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
      if (image.samples[p] > 255) throw IoError("8-bit sample out of range");
      buf[p] = static_cast<png_byte>(image.samples[p]);
    }
  }
  EncodePng(path, image.width, image.height, PNG_COLOR_TYPE_GRAY,
            image.bit_depth, buf.data(),
            static_cast<std::size_t>(image.width) * (image.bit_depth / 8));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  const std::string magic = PnmToken(in);
  if (magic != "P2" && magic != "P5") {
    throw IoError(path.string() + ": not a PGM file (expected P2 or P5)");
  }
  GrayImage img;
  img.width = static_cast<int>(PnmNumber(in, path));
  img.height = static_cast<int>(PnmNumber(in, path));
  const long maxval = PnmNumber(in, path);
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535) {
    throw IoError(path.string() + ": unsupported PGM dimensions or maxval");
  }
  img.bit_depth = maxval > 255 ? 16 : 8;
  const std::size_t count =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.samples.resize(count);
  if (magic == "P2") {
    for (std::size_t p = 0; p < count; ++p) {
      const long v = PnmNumber(in, path);
      if (v > maxval) throw IoError(path.string() + ": sample above maxval");
      img.samples[p] = static_cast<std::uint16_t>(v);
    }
  } else {
    const std::size_t bytes = img.bit_depth == 16 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    if (!in.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(raw.size()))) {
      throw IoError(path.string() + ": truncated PGM data");
    }
    for (std::size_t p = 0; p < count; ++p) {
      // 16-bit PGM samples are big-endian.
      img.samples[p] = bytes == 2
                           ? static_cast<std::uint16_t>(raw[2 * p] << 8 | raw[2 * p + 1])
                           : raw[p];
      if (img.samples[p] > maxval) {
        throw IoError(path.string() + ": sample above maxval");
      }
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  CheckGray(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const int maxval = image.bit_depth == 16 ? 65535 : 255;
  out << "P5\n" << image.width << ' ' << image.height << '\n' << maxval << '\n';
  for (std::uint16_t s : image.samples) {
    if (image.bit_depth == 16) {
      out.put(static_cast<char>(s >> 8));
      out.put(static_cast<char>(s & 0xff));
    } else {
      if (s > 255) throw IoError("8-bit sample out of range");
      out.put(static_cast<char>(s));
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace hot
