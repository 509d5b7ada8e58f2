#pragma once

#include <optional>
#include <vector>

#include "emorec/edges.hpp"
#include "emorec/feature_vector.hpp"
#include "emorec/locate.hpp"
#include "emorec/plane.hpp"

namespace emorec::features {

/// Every constant the extractors leave open.
struct FeatureParams {
  int lip_dilation_radius = 2;    ///< disk SE before the corner map
  int mouth_opening_radius = 2;   ///< disk SE opening the mouth edge image
  int brow_gradient_radius = 1;   ///< disk SE of the brow morphological gradient
  int brow_opening_width = 3;     ///< horizontal line SE opening the brow edge image
  double brow_binarize_threshold = 0.5;
  double mgii_sigma_factor = 1.0;  ///< "high" = value > column mean + factor * column std
  int smoothing_window = 9;
  int smoothing_passes = 2;
  double peak_fraction = 0.2;
  int peak_separation = 10;
  edges::CannyParams canny{};
  locate::LocateParams locate{};

  void validate() const;
};

// --- mouth opening ---------------------------------------------------------

/// 0.95 * mean(cr^2) / mean(cr / cb) over unit-interval chroma (cb clamped at 1/255).
double compute_n(const RealPlane& cr, const RealPlane& cb);
double compute_n(const ChromaImage& lips);

/// cr^2 * (cr^2 - n * cr / cb)^2 for one pixel.
double mouth_map_value(double cr, double cb, double n);

/// Mouth map before rescaling (n computed from the same planes).
RealPlane mouth_map_raw(const RealPlane& cr, const RealPlane& cb);

/// Mouth map of a lips crop, rescaled so the maximum is 1.
RealPlane mouth_map(const ChromaImage& lips);

struct MouthOpening {
  int peak_count = 0;
  double mo = 0.0;
  RealPlane edges;                  ///< opened Sobel magnitude of the mouth map
  std::vector<double> row_profile;  ///< per-row edge sum
  std::vector<double> smoothed;
  edges::PeakSet peaks;
};

/// Two or more peaks: mo = row distance of the two tallest; otherwise mo = 0.
MouthOpening mouth_opening(const ChromaImage& lips, const FeatureParams& params = {});

// --- eyebrows --------------------------------------------------------------

/// Mean row of the "high" samples in each column, averaged over columns that
/// have any, divided by the height. nullopt if no column has a high sample.
template <typename T>
std::optional<double> mean_high_row(const Plane<T>& energy, double sigma_factor);

/// MGII: morphological gradient of the grayscale brow, then mean_high_row.
/// Throws ExtractionError("eyebrow_mgii") on a featureless window.
double eyebrow_mean_mgii(const GrayPlane& brow, const FeatureParams& params = {});

/// Row of the first foreground pixel in each column (nullopt where none).
struct BrowLine {
  std::vector<std::optional<int>> heights;

  int present() const;
};

BrowLine first_foreground_line(const GrayPlane& edges);

/// Sum of |height differences| between consecutive present columns divided
/// by the number of present columns. Throws ExtractionError("eyebrow_dcl")
/// with fewer than two present columns.
double line_curvature(const BrowLine& line);

struct BrowCurvature {
  double ebc = 0.0;
  GrayPlane edges;  ///< opened Sobel edge image the line was traced on
  BrowLine line;
};

/// DCL: binarize (dark foreground), Sobel, opening, first-foreground line, curvature.
BrowCurvature eyebrow_curvature(const ColorImage& brow, const FeatureParams& params = {});
double eyebrow_curvature_dcl(const ColorImage& brow, const FeatureParams& params = {});

// --- mouth corners ---------------------------------------------------------

/// (1 - g)^6 with g = luminance / 255.
double corner_map_value(double g);
RealPlane corner_map(const GrayPlane& lips_gray);

struct MouthCorners {
  locate::Point left;
  locate::Point right;
  double lc = 0.0;
  RealPlane map;  ///< corner map of the dilated luminance
};

/// Corner map of the disk-dilated luminance; the first sample >= max / 2 met
/// scanning columns left-to-right is the left corner, right-to-left the
/// right one. `support`, when given, zeroes the map where it is 0 (pixels
/// blacked out by the face mask). Throws ExtractionError("mouth_corners")
/// when the map is identically zero.
MouthCorners mouth_corners(const ChromaImage& lips, const FeatureParams& params = {},
                           const GrayPlane* support = nullptr);

// --- wrinkles --------------------------------------------------------------

/// Number of Canny edge pixels.
long wrinkle_intensity(const GrayPlane& region, const edges::CannyParams& params = {});

// --- end to end ------------------------------------------------------------

/// Every intermediate of one run, kept for inspection.
struct FaceAnalysis {
  FeatureVector features;
  ColorImage face;  ///< masked, resized face frame
  RealPlane eye_map;
  locate::EyePair eyes;
  locate::FaceRegions regions;
  RealPlane mouth_map;
  MouthOpening mouth;
  MouthCorners corners;
  RealPlane left_brow_gradient;
  BrowCurvature left_brow;
  BrowCurvature right_brow;
  double left_ebm = 0.0;
  double right_ebm = 0.0;
  GrayPlane wrinkle_edges;
};

/// Elliptic mask, resize to 381 x 281, chroma conversion, eye localization,
/// region derivation and the five extractors. Brow features are the mean of
/// both brows. `face_rect` selects the face inside `image` (default: all of it).
/// Any stage failure surfaces as ExtractionError naming the stage.
FaceAnalysis analyze_face(const ColorImage& image, const FeatureParams& params = {},
                          const std::optional<Rect>& face_rect = std::nullopt);

FeatureVector extract_features(const ColorImage& image, const FeatureParams& params = {},
                               const std::optional<Rect>& face_rect = std::nullopt);

}  // namespace emorec::features
