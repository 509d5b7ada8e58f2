#pragma once

#include "emorec/plane.hpp"

namespace emorec::locate {

struct Point {
  double row = 0.0;
  double col = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Eye centroids in face-frame pixels; left.col < right.col.
struct EyePair {
  Point left;
  Point right;
};

struct FaceRegions {
  Rect left_brow;
  Rect right_brow;
  Rect wrinkle;
  Rect lips;
};

/// Tunables for eye search and region geometry. Fractions are of the face
/// frame height H (rows) or width W (columns).
struct LocateParams {
  double band_top = 0.20;            ///< eye search band, rows [top*H, bottom*H)
  double band_bottom = 0.55;
  double threshold_fraction = 0.80;  ///< white = value >= fraction * band max
  double brow_width = 0.35;          ///< of W, centered on the eye column
  double brow_top = 0.18;            ///< brow rows [eye - top*H, eye - bottom*H)
  double brow_bottom = 0.02;
  double wrinkle_top = 0.25;         ///< wrinkle rows [mean eye - top*H, mean eye - bottom*H)
  double wrinkle_bottom = 0.05;

  void validate() const;
};

/// Unit-interval chroma convention shared by the chroma maps: Cb is clamped
/// below at 1/255 so Cr/Cb stays finite.
inline constexpr double kMinUnitCb = 1.0 / 255.0;

/// Eye-map response of one pixel before rescaling: cr^2 * (cr^2 - cr/cb)^4.
double eye_map_value(double cr, double cb);

/// Eye map before rescaling, from unit-interval chroma planes.
RealPlane eye_map_raw(const RealPlane& cr, const RealPlane& cb);

/// Eye map of a chroma image, rescaled so its maximum is 1 (an all-zero map stays zero).
RealPlane eye_map(const ChromaImage& c);

/// Binarizes the search band and returns the centroids of the first
/// 8-connected white component met scanning columns left-to-right (left eye)
/// and right-to-left (right eye). Throws ExtractionError("locate_eyes") if
/// the band is dark or both scans hit the same component.
EyePair locate_eyes(const RealPlane& eye_map, const LocateParams& params = {});

/// Lips are fixed at rows 250..381 (1-based) over the full width; brow and
/// wrinkle boxes follow the eyes and are clamped to the frame. Throws
/// ExtractionError("derive_regions") if any box ends up empty.
FaceRegions derive_regions(const EyePair& eyes, int frame_width, int frame_height,
                           const LocateParams& params = {});

/// Lips rectangle for a frame of the given size.
Rect lips_rect(int frame_width, int frame_height);

}  // namespace emorec::locate
