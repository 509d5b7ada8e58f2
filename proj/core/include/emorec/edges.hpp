#pragma once

#include <span>
#include <vector>

#include "emorec/plane.hpp"

namespace emorec::edges {

/// Raw 3x3 Sobel magnitude sqrt(gx^2 + gy^2) in the input's units; the
/// one-pixel border is 0. Planes smaller than 3x3 are an ArgumentError.
template <typename T>
RealPlane sobel_magnitude(const Plane<T>& p);

/// Separable Gaussian blur with replicated borders; kernel radius ceil(3 sigma).
RealPlane gaussian_blur(const RealPlane& p, double sigma);

enum class ThresholdMode {
  Absolute,       ///< thresholds are gradient magnitudes
  FractionOfMax,  ///< thresholds are fractions of the image's peak gradient
};

struct CannyParams {
  double low_threshold = 0.1;
  double high_threshold = 0.25;
  double gaussian_sigma = 1.4;
  ThresholdMode mode = ThresholdMode::FractionOfMax;

  /// Throws ArgumentError unless 0 < low < high (and high <= 1 for FractionOfMax).
  void validate() const;
};

/// Gradient field Canny works on: Sobel of the blurred unit-interval image.
struct GradientField {
  RealPlane magnitude;
  RealPlane gx;
  RealPlane gy;
};

template <typename T>
GradientField canny_gradient(const Plane<T>& p, double sigma);

/// Gaussian blur, Sobel gradient, non-maximum suppression and hysteresis
/// (8-connected). Input samples are mapped to [0, 1] first (u8 / 255).
/// Output is binary 0/255. Planes smaller than 5x5 are an ArgumentError.
/// In FractionOfMax mode a gradient-free image yields no edges.
template <typename T>
GrayPlane canny(const Plane<T>& p, const CannyParams& params);

enum class Polarity {
  DarkForeground,   ///< foreground where value < threshold
  LightForeground,  ///< foreground where value >= threshold
};

/// Samples are normalized to [0, 1] (u8 / 255; reals are clamped) and
/// compared to `threshold`. Output is binary 0/255.
template <typename T>
GrayPlane binarize(const Plane<T>& p, double threshold, Polarity polarity);

/// Centered moving average, `passes` times. Near the ends the average runs
/// over the part of the window that exists. `window` must be odd and no
/// longer than the signal.
std::vector<double> smooth_1d(std::span<const double> signal, int window, int passes);

struct PeakSet {
  std::vector<int> positions;
  std::vector<double> heights;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

/// Interior local maxima (a flat top counts once, at its midpoint) with
/// height >= min_prominence_fraction * global max. Taller peaks are accepted
/// first; a later one closer than `min_separation` to an accepted peak is
/// dropped. Positions come back ascending. Non-positive signals give no peaks.
PeakSet find_peaks(std::span<const double> signal, double min_prominence_fraction,
                   int min_separation);

/// Sum of each row.
template <typename T>
std::vector<double> row_sums(const Plane<T>& p);

}  // namespace emorec::edges
