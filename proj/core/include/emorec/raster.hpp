#pragma once

#include "emorec/plane.hpp"

namespace emorec::raster {

/// Canonical face frame every extractor works in.
inline constexpr int kFaceRows = 381;
inline constexpr int kFaceCols = 281;

/// Full-range BT.601 conversion; channels rounded to nearest and clamped to [0, 255].
ChromaImage to_ycbcr(const ColorImage& img);

/// Luma only (same coefficients as to_ycbcr).
GrayPlane to_gray(const ColorImage& img);

/// True where (row, col) lies inside the axis-aligned ellipse inscribed in `r`.
bool inside_inscribed_ellipse(const Rect& r, int row, int col);

/// Binary plane (0/255) of the ellipse inscribed in `r`, sized width x height.
GrayPlane ellipse_support(int width, int height, const Rect& r);

/// Blacks out every pixel outside the ellipse inscribed in `face`.
/// Throws BoundsError if `face` does not fit the image.
ColorImage apply_elliptic_mask(const ColorImage& img, const Rect& face);

/// Bilinear resize with corner-anchored sampling (corners map onto corners).
ColorImage resize_bilinear(const ColorImage& img, int width, int height);

/// Resize to the canonical 381 x 281 face frame.
ColorImage resize_face(const ColorImage& img);

Rect full_frame(int width, int height);

template <typename T>
Plane<T> crop(const Plane<T>& p, const Rect& r) {
  if (!r.fits_in(p.width(), p.height())) {
    throw BoundsError("crop rectangle outside plane");
  }
  Plane<T> out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    auto src = p.row(r.y0 + y).subspan(static_cast<std::size_t>(r.x0), static_cast<std::size_t>(r.w));
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

ColorImage crop(const ColorImage& img, const Rect& r);
ChromaImage crop(const ChromaImage& img, const Rect& r);

/// Left-right mirror.
template <typename T>
Plane<T> mirror(const Plane<T>& p) {
  Plane<T> out(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      out.at(y, p.width() - 1 - x) = p.at(y, x);
    }
  }
  return out;
}

ColorImage mirror(const ColorImage& img);
ChromaImage mirror(const ChromaImage& img);

template <typename T>
Plane<T> transpose(const Plane<T>& p) {
  Plane<T> out(p.height(), p.width());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      out.at(x, y) = p.at(y, x);
    }
  }
  return out;
}

/// u8 -> [0, 1].
RealPlane to_unit(const GrayPlane& p);

/// Linear map of [0, max] onto [0, 255]; an all-zero plane stays zero.
GrayPlane to_gray8(const RealPlane& p);

}  // namespace emorec::raster
