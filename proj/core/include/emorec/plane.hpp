#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "emorec/error.hpp"

namespace emorec {

/// Axis-aligned rectangle in pixel units. x is the column offset, y the row.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;

  int x1() const { return x0 + w; }  // exclusive
  int y1() const { return y0 + h; }  // exclusive
  long long area() const { return static_cast<long long>(w) * h; }
  bool fits_in(int width, int height) const {
    return w >= 1 && h >= 1 && x0 >= 0 && y0 >= 0 && x1() <= width && y1() <= height;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Rect `inner`, expressed relative to `outer`, mapped back into the frame of `outer`'s parent.
inline Rect compose(const Rect& outer, const Rect& inner) {
  return {outer.x0 + inner.x0, outer.y0 + inner.y0, inner.w, inner.h};
}

/// Single-channel row-major grid. Sample type doubles as the tag:
/// `GrayPlane` holds 8-bit samples, `RealPlane` holds unit-interval (or raw
/// filter response) doubles.
template <typename T>
class Plane {
  static_assert(std::is_arithmetic_v<T>);

 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw ArgumentError("Plane dimensions must be at least 1x1");
    }
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  T& at(int row, int col) { return samples_[index(row, col)]; }
  const T& at(int row, int col) const { return samples_[index(row, col)]; }

  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  std::span<T> row(int r) {
    return {samples_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int r) const {
    return {samples_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
  }

  std::span<T> samples() { return samples_; }
  std::span<const T> samples() const { return samples_; }

  T max_value() const { return *std::max_element(samples_.begin(), samples_.end()); }
  T min_value() const { return *std::min_element(samples_.begin(), samples_.end()); }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> samples_;
};

using GrayPlane = Plane<std::uint8_t>;
using RealPlane = Plane<double>;

/// Largest value a plane of this sample type can represent.
template <typename T>
constexpr T plane_max() {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    return 255;
  } else {
    return std::numeric_limits<T>::max();
  }
}

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB image, row-major.
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(int width, int height, Rgb fill = {}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw ArgumentError("ColorImage dimensions must be at least 1x1");
    }
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Rgb& at(int row, int col) { return pixels_[static_cast<std::size_t>(row) * width_ + col]; }
  const Rgb& at(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<Rgb> pixels() { return pixels_; }
  std::span<const Rgb> pixels() const { return pixels_; }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Y/Cb/Cr planes of one image; all three share dimensions.
struct ChromaImage {
  GrayPlane y;
  GrayPlane cb;
  GrayPlane cr;

  int width() const { return y.width(); }
  int height() const { return y.height(); }
  friend bool operator==(const ChromaImage&, const ChromaImage&) = default;
};

}  // namespace emorec
