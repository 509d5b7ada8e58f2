#include "emorec/morphology.hpp"

#include <algorithm>
#include <limits>

namespace emorec::morph {

StructuringElement::StructuringElement(int rows, int cols, std::vector<bool> mask, int origin_row,
                                       int origin_col)
    : rows_(rows), cols_(cols), mask_(std::move(mask)), origin_row_(origin_row),
      origin_col_(origin_col) {
  if (rows < 1 || cols < 1 || mask_.size() != static_cast<std::size_t>(rows) * cols) {
    throw ArgumentError("structuring element mask does not match its dimensions");
  }
  if (origin_row < 0 || origin_col < 0 || origin_row >= rows || origin_col >= cols) {
    throw ArgumentError("structuring element origin outside the mask");
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (at(r, c)) offsets_.push_back({r - origin_row, c - origin_col});
    }
  }
  if (offsets_.empty()) {
    throw ArgumentError("structuring element has no true cell");
  }
}

int StructuringElement::count() const { return static_cast<int>(offsets_.size()); }

StructuringElement StructuringElement::reflect() const {
  std::vector<bool> mask(mask_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      mask[static_cast<std::size_t>(rows_ - 1 - r) * cols_ + (cols_ - 1 - c)] = at(r, c);
    }
  }
  return {rows_, cols_, std::move(mask), rows_ - 1 - origin_row_, cols_ - 1 - origin_col_};
}

StructuringElement disk_se(int radius) {
  if (radius < 1) {
    throw ArgumentError("disk radius must be >= 1");
  }
  const int n = 2 * radius + 1;
  std::vector<bool> mask(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int dy = r - radius;
      const int dx = c - radius;
      mask[static_cast<std::size_t>(r) * n + c] = dx * dx + dy * dy <= radius * radius;
    }
  }
  return {n, n, std::move(mask), radius, radius};
}

StructuringElement rect_se(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0) {
    throw ArgumentError("rectangular SE needs odd positive dimensions");
  }
  return {rows, cols, std::vector<bool>(static_cast<std::size_t>(rows) * cols, true), rows / 2,
          cols / 2};
}

StructuringElement hline_se(int length) { return rect_se(1, length); }

namespace {

// out(y, x) = reduce over offsets of p(y + sign*dr, x + sign*dc), skipping
// samples outside the plane (equivalent to padding with the reduction's identity).
template <typename T, typename Reduce>
Plane<T> neighborhood(const Plane<T>& p, const StructuringElement& se, int sign, T identity,
                      Reduce reduce) {
  Plane<T> out(p.width(), p.height(), identity);
  const int h = p.height();
  const int w = p.width();
  for (const auto& off : se.offsets()) {
    const int dr = sign * off.dr;
    const int dc = sign * off.dc;
    const int y_lo = std::max(0, -dr);
    const int y_hi = std::min(h, h - dr);
    const int x_lo = std::max(0, -dc);
    const int x_hi = std::min(w, w - dc);
    for (int y = y_lo; y < y_hi; ++y) {
      auto src = p.row(y + dr);
      auto dst = out.row(y);
      for (int x = x_lo; x < x_hi; ++x) {
        dst[x] = reduce(dst[x], src[x + dc]);
      }
    }
  }
  return out;
}

}  // namespace

template <typename T>
Plane<T> dilate(const Plane<T>& p, const StructuringElement& se) {
  // Max over the reflected footprint: p(y - dr, x - dc).
  return neighborhood(p, se, -1, T{0}, [](T a, T b) { return std::max(a, b); });
}

template <typename T>
Plane<T> erode(const Plane<T>& p, const StructuringElement& se) {
  return neighborhood(p, se, +1, plane_max<T>(), [](T a, T b) { return std::min(a, b); });
}

template <typename T>
Plane<T> open(const Plane<T>& p, const StructuringElement& se) {
  return dilate(erode(p, se), se);
}

template <typename T>
Plane<T> close(const Plane<T>& p, const StructuringElement& se) {
  return erode(dilate(p, se), se);
}

template <typename T>
Plane<T> gradient(const Plane<T>& p, const StructuringElement& se) {
  Plane<T> hi = dilate(p, se);
  const Plane<T> lo = erode(p, se);
  auto a = hi.samples();
  auto b = lo.samples();
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = a[i] > b[i] ? static_cast<T>(a[i] - b[i]) : T{0};
  }
  return hi;
}

GrayPlane invert(const GrayPlane& p) {
  GrayPlane out = p;
  for (auto& v : out.samples()) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

#define EMOREC_MORPH_INSTANTIATE(T)                                            \
  template Plane<T> dilate<T>(const Plane<T>&, const StructuringElement&);   \
  template Plane<T> erode<T>(const Plane<T>&, const StructuringElement&);    \
  template Plane<T> open<T>(const Plane<T>&, const StructuringElement&);     \
  template Plane<T> close<T>(const Plane<T>&, const StructuringElement&);    \
  template Plane<T> gradient<T>(const Plane<T>&, const StructuringElement&);

EMOREC_MORPH_INSTANTIATE(std::uint8_t)
EMOREC_MORPH_INSTANTIATE(double)

#undef EMOREC_MORPH_INSTANTIATE

}  // namespace emorec::morph
