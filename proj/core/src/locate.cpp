#include "emorec/locate.hpp"

#include <cmath>
#include <vector>

#include "emorec/raster.hpp"

namespace emorec::locate {

void LocateParams::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(band_top) || !unit(band_bottom) || band_top >= band_bottom) {
    throw ArgumentError("eye search band must satisfy 0 <= top < bottom <= 1");
  }
  if (!(threshold_fraction > 0.0) || threshold_fraction > 1.0) {
    throw ArgumentError("eye threshold fraction must be in (0, 1]");
  }
  if (!(brow_width > 0.0) || brow_width > 1.0) {
    throw ArgumentError("brow width fraction must be in (0, 1]");
  }
  if (!unit(brow_top) || !unit(brow_bottom) || brow_top <= brow_bottom) {
    throw ArgumentError("brow fractions must satisfy 0 <= bottom < top <= 1");
  }
  if (!unit(wrinkle_top) || !unit(wrinkle_bottom) || wrinkle_top <= wrinkle_bottom) {
    throw ArgumentError("wrinkle fractions must satisfy 0 <= bottom < top <= 1");
  }
}

double eye_map_value(double cr, double cb) {
  cb = std::max(cb, kMinUnitCb);
  const double cr2 = cr * cr;
  const double t = cr2 - cr / cb;
  const double t2 = t * t;
  return cr2 * t2 * t2;
}

RealPlane eye_map_raw(const RealPlane& cr, const RealPlane& cb) {
  RealPlane out(cr.width(), cr.height());
  auto r = cr.samples();
  auto b = cb.samples();
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = eye_map_value(r[i], b[i]);
  return out;
}

namespace {

void rescale_to_unit(RealPlane& p) {
  const double m = p.max_value();
  if (m > 0.0) {
    for (double& v : p.samples()) v /= m;
  }
}

struct Component {
  double row_sum = 0.0;
  double col_sum = 0.0;
  long count = 0;
};

}  // namespace

RealPlane eye_map(const ChromaImage& c) {
  RealPlane out = eye_map_raw(raster::to_unit(c.cr), raster::to_unit(c.cb));
  rescale_to_unit(out);
  return out;
}

EyePair locate_eyes(const RealPlane& em, const LocateParams& params) {
  params.validate();
  const int h = em.height();
  const int w = em.width();
  const int top = std::clamp(static_cast<int>(std::lround(params.band_top * h)), 0, h);
  const int bottom = std::clamp(static_cast<int>(std::lround(params.band_bottom * h)), 0, h);
  if (bottom <= top) {
    throw ExtractionError("locate_eyes", "eye search band is empty");
  }

  double band_max = 0.0;
  for (int y = top; y < bottom; ++y) {
    for (double v : em.row(y)) band_max = std::max(band_max, v);
  }
  if (!(band_max > 0.0)) {
    throw ExtractionError("locate_eyes", "no eye-map response in the search band");
  }
  const double threshold = params.threshold_fraction * band_max;

  // Label 8-connected white components inside the band.
  const int bh = bottom - top;
  std::vector<int> label(static_cast<std::size_t>(bh) * w, -1);
  std::vector<Component> comps;
  auto white = [&](int y, int x) { return em.at(top + y, x) >= threshold; };
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < bh; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!white(y, x) || label[static_cast<std::size_t>(y) * w + x] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      comps.emplace_back();
      label[static_cast<std::size_t>(y) * w + x] = id;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        auto [cy, cx] = stack.back();
        stack.pop_back();
        comps[id].row_sum += top + cy;
        comps[id].col_sum += cx;
        ++comps[id].count;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = cy + dy;
            const int nx = cx + dx;
            if (ny < 0 || nx < 0 || ny >= bh || nx >= w) continue;
            auto& l = label[static_cast<std::size_t>(ny) * w + nx];
            if (l < 0 && white(ny, nx)) {
              l = id;
              stack.emplace_back(ny, nx);
            }
          }
        }
      }
    }
  }

  auto first_in_column_scan = [&](bool left_to_right) {
    for (int i = 0; i < w; ++i) {
      const int x = left_to_right ? i : w - 1 - i;
      for (int y = 0; y < bh; ++y) {
        const int l = label[static_cast<std::size_t>(y) * w + x];
        if (l >= 0) return l;
      }
    }
    return -1;
  };
  const int left_id = first_in_column_scan(true);
  const int right_id = first_in_column_scan(false);
  if (left_id < 0 || right_id < 0) {
    throw ExtractionError("locate_eyes", "no white pixels in the eye search band");
  }
  if (left_id == right_id) {
    throw ExtractionError("locate_eyes", "only one eye candidate found");
  }
  auto centroid = [&](int id) {
    const Component& c = comps[id];
    return Point{c.row_sum / c.count, c.col_sum / c.count};
  };
  EyePair eyes{centroid(left_id), centroid(right_id)};
  if (!(eyes.left.col < eyes.right.col)) {
    throw ExtractionError("locate_eyes", "eye candidates are not left/right separated");
  }
  return eyes;
}

Rect lips_rect(int frame_width, int frame_height) {
  // Rows 250..381 (1-based, inclusive) of the 381-row frame.
  const int y0 = std::min(249, frame_height - 1);
  return {0, y0, frame_width, frame_height - y0};
}

namespace {

// Clamps [x0, x1) x [y0, y1) to the frame; empty results yield w or h of 0.
Rect clamped(int x0, int x1, int y0, int y1, int fw, int fh) {
  x0 = std::clamp(x0, 0, fw);
  x1 = std::clamp(x1, 0, fw);
  y0 = std::clamp(y0, 0, fh);
  y1 = std::clamp(y1, 0, fh);
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

int iround(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace

FaceRegions derive_regions(const EyePair& eyes, int fw, int fh, const LocateParams& params) {
  params.validate();
  const double H = fh;
  // Odd width so the box is symmetric about the eye column.
  const int half = iround(params.brow_width * fw / 2.0);

  auto brow = [&](const Point& eye) {
    const int c = iround(eye.col);
    return clamped(c - half, c + half + 1, iround(eye.row - params.brow_top * H),
                   iround(eye.row - params.brow_bottom * H), fw, fh);
  };

  const double mean_row = (eyes.left.row + eyes.right.row) / 2.0;
  FaceRegions regions{
      brow(eyes.left),
      brow(eyes.right),
      clamped(iround(eyes.left.col), iround(eyes.right.col) + 1,
              iround(mean_row - params.wrinkle_top * H), iround(mean_row - params.wrinkle_bottom * H),
              fw, fh),
      lips_rect(fw, fh),
  };
  for (const Rect* r : {&regions.left_brow, &regions.right_brow, &regions.wrinkle, &regions.lips}) {
    if (r->area() <= 0) {
      throw ExtractionError("derive_regions", "a facial region is empty after clamping to the frame");
    }
  }
  return regions;
}

}  // namespace emorec::locate
