#pragma once

namespace emorec {

/// The five per-face features.
struct FeatureVector {
  double mo = 0.0;   ///< mouth opening, rows between lip-edge peaks (0 when closed)
  double lc = 0.0;   ///< mouth-corner distance, pixels
  double w = 0.0;    ///< wrinkle intensity, Canny edge-pixel count
  double ebc = 0.0;  ///< eyebrow curvature (sum of |slope| over line length)
  double ebm = 0.0;  ///< eyebrow mean row over brow-window height, in [0, 1]

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

}  // namespace emorec
