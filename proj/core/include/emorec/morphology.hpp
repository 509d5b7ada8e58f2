#pragma once

#include <vector>

#include "emorec/plane.hpp"

namespace emorec::morph {

/// Binary footprint with an origin cell. Cells are stored row-major.
class StructuringElement {
 public:
  /// Throws ArgumentError if the mask is empty, ragged, all-false, or the
  /// origin lies outside it.
  StructuringElement(int rows, int cols, std::vector<bool> mask, int origin_row, int origin_col);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int origin_row() const { return origin_row_; }
  int origin_col() const { return origin_col_; }
  bool at(int r, int c) const { return mask_[static_cast<std::size_t>(r) * cols_ + c]; }
  int count() const;

  /// Point reflection through the origin.
  StructuringElement reflect() const;

  /// (drow, dcol) offsets of every true cell relative to the origin.
  struct Offset {
    int dr;
    int dc;
  };
  const std::vector<Offset>& offsets() const { return offsets_; }

  friend bool operator==(const StructuringElement& a, const StructuringElement& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.origin_row_ == b.origin_row_ &&
           a.origin_col_ == b.origin_col_ && a.mask_ == b.mask_;
  }

 private:
  int rows_;
  int cols_;
  std::vector<bool> mask_;
  int origin_row_;
  int origin_col_;
  std::vector<Offset> offsets_;
};

/// Euclidean disk: cells whose center lies within `radius` of the origin.
/// radius < 1 is an ArgumentError.
StructuringElement disk_se(int radius);

/// Full rows x cols rectangle with a centered origin (both must be odd).
StructuringElement rect_se(int rows, int cols);

/// Horizontal 1 x length line (length odd).
StructuringElement hline_se(int length);

// Boundary policy: dilation treats out-of-bounds samples as 0, erosion as the
// largest representable value, so erode(p) == invert(dilate(invert(p), reflect(se))).

template <typename T>
Plane<T> dilate(const Plane<T>& p, const StructuringElement& se);

template <typename T>
Plane<T> erode(const Plane<T>& p, const StructuringElement& se);

/// dilate(erode(p)).
template <typename T>
Plane<T> open(const Plane<T>& p, const StructuringElement& se);

/// erode(dilate(p)).
template <typename T>
Plane<T> close(const Plane<T>& p, const StructuringElement& se);

/// dilate(p) - erode(p), saturating at 0.
template <typename T>
Plane<T> gradient(const Plane<T>& p, const StructuringElement& se);

/// 255 - v for 8-bit planes.
GrayPlane invert(const GrayPlane& p);

}  // namespace emorec::morph
