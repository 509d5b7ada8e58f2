#include "emorec/raster.hpp"

#include <cmath>

namespace emorec::raster {

namespace {

std::uint8_t clamp_round(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

double luma(const Rgb& p) { return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b; }

}  // namespace

ChromaImage to_ycbcr(const ColorImage& img) {
  ChromaImage out{GrayPlane(img.width(), img.height()), GrayPlane(img.width(), img.height()),
                  GrayPlane(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb& p = img.at(y, x);
      const double lum = luma(p);
      out.y.at(y, x) = clamp_round(lum);
      out.cb.at(y, x) = clamp_round(128.0 + 0.564 * (p.b - lum));
      out.cr.at(y, x) = clamp_round(128.0 + 0.713 * (p.r - lum));
    }
  }
  return out;
}

GrayPlane to_gray(const ColorImage& img) {
  GrayPlane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(y, x) = clamp_round(luma(img.at(y, x)));
    }
  }
  return out;
}

bool inside_inscribed_ellipse(const Rect& r, int row, int col) {
  const double cx = r.x0 + (r.w - 1) / 2.0;
  const double cy = r.y0 + (r.h - 1) / 2.0;
  const double dx = (col - cx) / (r.w / 2.0);
  const double dy = (row - cy) / (r.h / 2.0);
  return dx * dx + dy * dy <= 1.0;
}

GrayPlane ellipse_support(int width, int height, const Rect& r) {
  GrayPlane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out.at(y, x) = inside_inscribed_ellipse(r, y, x) ? 255 : 0;
    }
  }
  return out;
}

ColorImage apply_elliptic_mask(const ColorImage& img, const Rect& face) {
  if (!face.fits_in(img.width(), img.height())) {
    throw BoundsError("face rectangle outside image");
  }
  ColorImage out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!inside_inscribed_ellipse(face, y, x)) {
        out.at(y, x) = Rgb{};
      }
    }
  }
  return out;
}

ColorImage resize_bilinear(const ColorImage& img, int width, int height) {
  if (img.width() == width && img.height() == height) {
    return img;
  }
  ColorImage out(width, height);
  const double sx = width > 1 ? double(img.width() - 1) / (width - 1) : 0.0;
  const double sy = height > 1 ? double(img.height() - 1) / (height - 1) : 0.0;
  for (int y = 0; y < height; ++y) {
    const double fy = y * sy;
    const int y0 = std::min(static_cast<int>(fy), img.height() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = x * sx;
      const int x0 = std::min(static_cast<int>(fx), img.width() - 1);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      auto blend = [&](std::uint8_t Rgb::*ch) {
        const double top = (1 - tx) * (img.at(y0, x0).*ch) + tx * (img.at(y0, x1).*ch);
        const double bot = (1 - tx) * (img.at(y1, x0).*ch) + tx * (img.at(y1, x1).*ch);
        return clamp_round((1 - ty) * top + ty * bot);
      };
      out.at(y, x) = Rgb{blend(&Rgb::r), blend(&Rgb::g), blend(&Rgb::b)};
    }
  }
  return out;
}

ColorImage resize_face(const ColorImage& img) { return resize_bilinear(img, kFaceCols, kFaceRows); }

Rect full_frame(int width, int height) { return {0, 0, width, height}; }

ColorImage crop(const ColorImage& img, const Rect& r) {
  if (!r.fits_in(img.width(), img.height())) {
    throw BoundsError("crop rectangle outside image");
  }
  ColorImage out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    for (int x = 0; x < r.w; ++x) {
      out.at(y, x) = img.at(r.y0 + y, r.x0 + x);
    }
  }
  return out;
}

ChromaImage crop(const ChromaImage& img, const Rect& r) {
  return {crop(img.y, r), crop(img.cb, r), crop(img.cr, r)};
}

ColorImage mirror(const ColorImage& img) {
  ColorImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(y, img.width() - 1 - x) = img.at(y, x);
    }
  }
  return out;
}

ChromaImage mirror(const ChromaImage& img) {
  return {mirror(img.y), mirror(img.cb), mirror(img.cr)};
}

RealPlane to_unit(const GrayPlane& p) {
  RealPlane out(p.width(), p.height());
  auto src = p.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] / 255.0;
  }
  return out;
}

GrayPlane to_gray8(const RealPlane& p) {
  GrayPlane out(p.width(), p.height());
  const double m = p.max_value();
  if (m <= 0.0) {
    return out;
  }
  auto src = p.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = clamp_round(std::max(src[i], 0.0) / m * 255.0);
  }
  return out;
}

}  // namespace emorec::raster
