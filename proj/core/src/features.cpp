#include "emorec/features.hpp"

#include <cmath>
#include <numeric>

#include "emorec/morphology.hpp"
#include "emorec/raster.hpp"

namespace emorec::features {

void FeatureParams::validate() const {
  if (lip_dilation_radius < 1 || mouth_opening_radius < 1 || brow_gradient_radius < 1) {
    throw ArgumentError("structuring element radii must be >= 1");
  }
  if (brow_opening_width < 1 || brow_opening_width % 2 == 0) {
    throw ArgumentError("brow opening width must be odd and positive");
  }
  if (!(brow_binarize_threshold > 0.0 && brow_binarize_threshold < 1.0)) {
    throw ArgumentError("brow binarization threshold must be in (0, 1)");
  }
  if (mgii_sigma_factor < 0.0) {
    throw ArgumentError("MGII sigma factor must be non-negative");
  }
  if (smoothing_window < 1 || smoothing_window % 2 == 0 || smoothing_passes < 0) {
    throw ArgumentError("smoothing window must be odd and positive, passes non-negative");
  }
  if (!(peak_fraction >= 0.0 && peak_fraction <= 1.0) || peak_separation < 1) {
    throw ArgumentError("peak fraction must be in [0, 1] and separation >= 1");
  }
  canny.validate();
  locate.validate();
}

// --- mouth opening ---------------------------------------------------------

double compute_n(const RealPlane& cr, const RealPlane& cb) {
  auto r = cr.samples();
  auto b = cb.samples();
  const double k = static_cast<double>(r.size());
  double sum_sq = 0.0;
  double sum_ratio = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    sum_sq += r[i] * r[i];
    sum_ratio += r[i] / std::max(b[i], locate::kMinUnitCb);
  }
  if (sum_ratio <= 0.0) return 0.0;
  return 0.95 * (sum_sq / k) / (sum_ratio / k);
}

double compute_n(const ChromaImage& lips) {
  return compute_n(raster::to_unit(lips.cr), raster::to_unit(lips.cb));
}

double mouth_map_value(double cr, double cb, double n) {
  cb = std::max(cb, locate::kMinUnitCb);
  const double cr2 = cr * cr;
  const double t = cr2 - n * cr / cb;
  return cr2 * t * t;
}

RealPlane mouth_map_raw(const RealPlane& cr, const RealPlane& cb) {
  const double n = compute_n(cr, cb);
  RealPlane out(cr.width(), cr.height());
  auto r = cr.samples();
  auto b = cb.samples();
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = mouth_map_value(r[i], b[i], n);
  return out;
}

RealPlane mouth_map(const ChromaImage& lips) {
  RealPlane out = mouth_map_raw(raster::to_unit(lips.cr), raster::to_unit(lips.cb));
  const double m = out.max_value();
  if (m > 0.0) {
    for (double& v : out.samples()) v /= m;
  }
  return out;
}

MouthOpening mouth_opening(const ChromaImage& lips, const FeatureParams& params) {
  if (lips.width() < 3 || lips.height() < std::max(3, params.smoothing_window)) {
    throw ExtractionError("mouth_opening", "lips region too small");
  }
  MouthOpening result;
  const RealPlane map = mouth_map(lips);
  result.edges = morph::open(edges::sobel_magnitude(map), morph::disk_se(params.mouth_opening_radius));
  result.row_profile = edges::row_sums(result.edges);
  result.smoothed = edges::smooth_1d(result.row_profile, params.smoothing_window, params.smoothing_passes);
  result.peaks = edges::find_peaks(result.smoothed, params.peak_fraction, params.peak_separation);
  result.peak_count = static_cast<int>(result.peaks.size());
  if (result.peak_count >= 2) {
    std::vector<std::size_t> order(result.peaks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return result.peaks.heights[a] > result.peaks.heights[b];
    });
    result.mo = std::abs(result.peaks.positions[order[0]] - result.peaks.positions[order[1]]);
  }
  return result;
}

// --- eyebrows --------------------------------------------------------------

template <typename T>
std::optional<double> mean_high_row(const Plane<T>& energy, double sigma_factor) {
  const int h = energy.height();
  double total = 0.0;
  int columns = 0;
  for (int x = 0; x < energy.width(); ++x) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int y = 0; y < h; ++y) {
      const double v = energy.at(y, x);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / h;
    const double var = std::max(0.0, sum_sq / h - mean * mean);
    const double cut = mean + sigma_factor * std::sqrt(var);
    double row_sum = 0.0;
    int count = 0;
    for (int y = 0; y < h; ++y) {
      if (energy.at(y, x) > cut) {
        row_sum += y;
        ++count;
      }
    }
    if (count > 0) {
      total += row_sum / count;
      ++columns;
    }
  }
  if (columns == 0) return std::nullopt;
  return total / columns / h;
}

template std::optional<double> mean_high_row<std::uint8_t>(const GrayPlane&, double);
template std::optional<double> mean_high_row<double>(const RealPlane&, double);

double eyebrow_mean_mgii(const GrayPlane& brow, const FeatureParams& params) {
  const GrayPlane grad = morph::gradient(brow, morph::disk_se(params.brow_gradient_radius));
  const auto ebm = mean_high_row(grad, params.mgii_sigma_factor);
  if (!ebm) {
    throw ExtractionError("eyebrow_mgii", "no high-intensity gradient in the brow window");
  }
  return *ebm;
}

int BrowLine::present() const {
  return static_cast<int>(std::count_if(heights.begin(), heights.end(),
                                        [](const auto& h) { return h.has_value(); }));
}

BrowLine first_foreground_line(const GrayPlane& edges) {
  BrowLine line;
  line.heights.resize(static_cast<std::size_t>(edges.width()));
  for (int x = 0; x < edges.width(); ++x) {
    for (int y = 0; y < edges.height(); ++y) {
      if (edges.at(y, x) != 0) {
        line.heights[x] = y;
        break;
      }
    }
  }
  return line;
}

double line_curvature(const BrowLine& line) {
  std::optional<int> prev;
  double sum = 0.0;
  int points = 0;
  for (const auto& h : line.heights) {
    if (!h) continue;
    if (prev) sum += std::abs(*h - *prev);
    prev = h;
    ++points;
  }
  if (points < 2) {
    throw ExtractionError("eyebrow_dcl", "brow line has fewer than two points");
  }
  return sum / points;
}

BrowCurvature eyebrow_curvature(const ColorImage& brow, const FeatureParams& params) {
  if (brow.width() < 3 || brow.height() < 3) {
    throw ExtractionError("eyebrow_dcl", "brow region too small");
  }
  const GrayPlane binary = edges::binarize(raster::to_gray(brow), params.brow_binarize_threshold,
                                           edges::Polarity::DarkForeground);
  const RealPlane sobel = edges::sobel_magnitude(binary);
  GrayPlane edge_mask(sobel.width(), sobel.height());
  {
    auto s = sobel.samples();
    auto e = edge_mask.samples();
    for (std::size_t i = 0; i < s.size(); ++i) e[i] = s[i] > 0.0 ? 255 : 0;
  }
  BrowCurvature out;
  out.edges = morph::open(edge_mask, morph::hline_se(params.brow_opening_width));
  out.line = first_foreground_line(out.edges);
  out.ebc = line_curvature(out.line);
  return out;
}

double eyebrow_curvature_dcl(const ColorImage& brow, const FeatureParams& params) {
  return eyebrow_curvature(brow, params).ebc;
}

// --- mouth corners ---------------------------------------------------------

double corner_map_value(double g) {
  const double d = 1.0 - g;
  const double d2 = d * d;
  return d2 * d2 * d2;
}

RealPlane corner_map(const GrayPlane& lips_gray) {
  RealPlane out(lips_gray.width(), lips_gray.height());
  auto src = lips_gray.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = corner_map_value(src[i] / 255.0);
  return out;
}

MouthCorners mouth_corners(const ChromaImage& lips, const FeatureParams& params,
                           const GrayPlane* support) {
  const GrayPlane dilated = morph::dilate(lips.y, morph::disk_se(params.lip_dilation_radius));
  MouthCorners out;
  out.map = corner_map(dilated);
  if (support) {
    if (support->width() != lips.width() || support->height() != lips.height()) {
      throw ArgumentError("corner support mask does not match the lips region");
    }
    auto m = out.map.samples();
    auto s = support->samples();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (s[i] == 0) m[i] = 0.0;
    }
  }
  const double peak = out.map.max_value();
  if (!(peak > 0.0)) {
    throw ExtractionError("mouth_corners", "corner map is identically zero");
  }
  const double half = peak / 2.0;
  const int w = out.map.width();
  const int h = out.map.height();
  auto scan = [&](bool left_to_right) {
    for (int i = 0; i < w; ++i) {
      const int x = left_to_right ? i : w - 1 - i;
      for (int y = 0; y < h; ++y) {
        if (out.map.at(y, x) >= half) return locate::Point{double(y), double(x)};
      }
    }
    return locate::Point{};  // unreachable: the peak itself qualifies
  };
  out.left = scan(true);
  out.right = scan(false);
  out.lc = std::hypot(out.right.row - out.left.row, out.right.col - out.left.col);
  return out;
}

// --- wrinkles --------------------------------------------------------------

long wrinkle_intensity(const GrayPlane& region, const edges::CannyParams& params) {
  if (region.width() < 5 || region.height() < 5) {
    throw ExtractionError("wrinkle_intensity", "wrinkle region too small");
  }
  const GrayPlane e = edges::canny(region, params);
  return std::count_if(e.samples().begin(), e.samples().end(), [](std::uint8_t v) { return v != 0; });
}

// --- end to end ------------------------------------------------------------

FaceAnalysis analyze_face(const ColorImage& image, const FeatureParams& params,
                          const std::optional<Rect>& face_rect) {
  params.validate();
  FaceAnalysis a;

  const Rect rect = face_rect.value_or(raster::full_frame(image.width(), image.height()));
  if (!rect.fits_in(image.width(), image.height())) {
    throw ExtractionError("preprocess", "face rectangle outside the image");
  }
  const ColorImage masked = raster::apply_elliptic_mask(image, rect);
  a.face = raster::resize_face(raster::crop(masked, rect));
  const ChromaImage chroma = raster::to_ycbcr(a.face);
  const int fw = a.face.width();
  const int fh = a.face.height();
  const GrayPlane support = raster::ellipse_support(fw, fh, raster::full_frame(fw, fh));

  a.eye_map = locate::eye_map(chroma);
  a.eyes = locate::locate_eyes(a.eye_map, params.locate);
  a.regions = locate::derive_regions(a.eyes, fw, fh, params.locate);

  const ChromaImage lips = raster::crop(chroma, a.regions.lips);
  a.mouth_map = mouth_map(lips);
  a.mouth = mouth_opening(lips, params);
  const GrayPlane lips_support = raster::crop(support, a.regions.lips);
  a.corners = mouth_corners(lips, params, &lips_support);

  const GrayPlane left_gray = raster::crop(chroma.y, a.regions.left_brow);
  const GrayPlane right_gray = raster::crop(chroma.y, a.regions.right_brow);
  a.left_brow_gradient = raster::to_unit(
      morph::gradient(left_gray, morph::disk_se(params.brow_gradient_radius)));
  a.left_ebm = eyebrow_mean_mgii(left_gray, params);
  a.right_ebm = eyebrow_mean_mgii(right_gray, params);
  a.left_brow = eyebrow_curvature(raster::crop(a.face, a.regions.left_brow), params);
  a.right_brow = eyebrow_curvature(raster::crop(a.face, a.regions.right_brow), params);

  const GrayPlane wrinkle = raster::crop(chroma.y, a.regions.wrinkle);
  if (wrinkle.width() < 5 || wrinkle.height() < 5) {
    throw ExtractionError("wrinkle_intensity", "wrinkle region too small");
  }
  a.wrinkle_edges = edges::canny(wrinkle, params.canny);

  a.features.mo = a.mouth.mo;
  a.features.lc = a.corners.lc;
  a.features.w = static_cast<double>(std::count_if(
      a.wrinkle_edges.samples().begin(), a.wrinkle_edges.samples().end(),
      [](std::uint8_t v) { return v != 0; }));
  a.features.ebc = (a.left_brow.ebc + a.right_brow.ebc) / 2.0;
  a.features.ebm = (a.left_ebm + a.right_ebm) / 2.0;
  return a;
}

FeatureVector extract_features(const ColorImage& image, const FeatureParams& params,
                               const std::optional<Rect>& face_rect) {
  return analyze_face(image, params, face_rect).features;
}

}  // namespace emorec::features
