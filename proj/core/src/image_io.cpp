#include "emorec/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace emorec::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoError("cannot open " + path.string());
  }
  return f;
}

bool has_png_signature(std::FILE* f) {
  png_byte sig[8] = {};
  const std::size_t n = std::fread(sig, 1, sizeof sig, f);
  std::rewind(f);
  return n == sizeof sig && png_sig_cmp(sig, 0, sizeof sig) == 0;
}

ColorImage read_png(std::FILE* f, const std::filesystem::path& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }
  ColorImage img;
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG: " + path.string());
  }
  png_init_io(png, f);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const std::size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<std::size_t>(width) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG layout: " + path.string());
  }
  buffer.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = buffer.data() + y * stride;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  img = ColorImage(static_cast<int>(width), static_cast<int>(height));
  for (png_uint_32 y = 0; y < height; ++y) {
    for (png_uint_32 x = 0; x < width; ++x) {
      const png_byte* px = rows[y] + 3 * x;
      img.at(static_cast<int>(y), static_cast<int>(x)) = Rgb{px[0], px[1], px[2]};
    }
  }
  return img;
}

// Skips whitespace and '#' comments between PPM header tokens.
int read_ppm_int(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = -1;
  in >> v;
  if (!in) throw IoError("malformed PPM header");
  return v;
}

ColorImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '6') {
    throw IoError("unsupported image format (expected PNG or binary PPM): " + path.string());
  }
  const int width = read_ppm_int(in);
  const int height = read_ppm_int(in);
  const int maxval = read_ppm_int(in);
  if (width < 1 || height < 1 || maxval != 255) {
    throw IoError("unsupported PPM (need 8-bit P6): " + path.string());
  }
  in.get();  // single whitespace after maxval
  std::vector<char> data(static_cast<std::size_t>(width) * height * 3);
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) {
    throw IoError("truncated PPM: " + path.string());
  }
  ColorImage img(width, height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = Rgb{static_cast<std::uint8_t>(data[3 * i]), static_cast<std::uint8_t>(data[3 * i + 1]),
                static_cast<std::uint8_t>(data[3 * i + 2])};
  }
  return img;
}

void write_png_rows(const std::filesystem::path& path, int width, int height, int color_type,
                    const std::vector<png_bytep>& rows) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ColorImage read_image(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  if (has_png_signature(f.get())) {
    return read_png(f.get(), path);
  }
  f.reset();
  return read_ppm(path);
}

void write_png(const std::filesystem::path& path, const ColorImage& img) {
  static_assert(sizeof(Rgb) == 3);
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  auto px = const_cast<Rgb*>(img.pixels().data());
  for (int y = 0; y < img.height(); ++y) {
    rows[y] = reinterpret_cast<png_bytep>(px + static_cast<std::size_t>(y) * img.width());
  }
  write_png_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, rows);
}

void write_png(const std::filesystem::path& path, const GrayPlane& plane) {
  std::vector<png_bytep> rows(static_cast<std::size_t>(plane.height()));
  for (int y = 0; y < plane.height(); ++y) {
    rows[y] = const_cast<png_bytep>(plane.row(y).data());
  }
  write_png_rows(path, plane.width(), plane.height(), PNG_COLOR_TYPE_GRAY, rows);
}

void write_ppm(const std::filesystem::path& path, const ColorImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (const Rgb& p : img.pixels()) {
    const char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
    out.write(bytes, 3);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace emorec::io
