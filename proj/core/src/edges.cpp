#include "emorec/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emorec::edges {

namespace {

template <typename T>
double unit_sample(T v) {
  if constexpr (std::is_same_v<T, std::uint8_t>) {
    return v / 255.0;
  } else {
    return std::clamp(static_cast<double>(v), 0.0, 1.0);
  }
}

template <typename T>
RealPlane to_unit_plane(const Plane<T>& p) {
  RealPlane out(p.width(), p.height());
  auto src = p.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = unit_sample(src[i]);
  return out;
}

template <typename T>
void sobel_components(const Plane<T>& p, RealPlane& gx, RealPlane& gy) {
  const int h = p.height();
  const int w = p.width();
  gx = RealPlane(w, h);
  gy = RealPlane(w, h);
  for (int y = 1; y + 1 < h; ++y) {
    auto up = p.row(y - 1);
    auto mid = p.row(y);
    auto dn = p.row(y + 1);
    for (int x = 1; x + 1 < w; ++x) {
      const double a = up[x - 1], b = up[x], c = up[x + 1];
      const double d = mid[x - 1], f = mid[x + 1];
      const double g = dn[x - 1], hh = dn[x], i = dn[x + 1];
      gx.at(y, x) = (c + 2 * f + i) - (a + 2 * d + g);
      gy.at(y, x) = (g + 2 * hh + i) - (a + 2 * b + c);
    }
  }
}

RealPlane hypot_plane(const RealPlane& gx, const RealPlane& gy) {
  RealPlane mag(gx.width(), gx.height());
  auto a = gx.samples();
  auto b = gy.samples();
  auto m = mag.samples();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
  return mag;
}

}  // namespace

template <typename T>
RealPlane sobel_magnitude(const Plane<T>& p) {
  if (p.width() < 3 || p.height() < 3) {
    throw ArgumentError("sobel_magnitude needs a plane of at least 3x3");
  }
  RealPlane gx, gy;
  sobel_components(p, gx, gy);
  return hypot_plane(gx, gy);
}

RealPlane gaussian_blur(const RealPlane& p, double sigma) {
  if (sigma <= 0.0) return p;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  }
  const double total = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (double& k : kernel) k /= total;

  const int h = p.height();
  const int w = p.width();
  RealPlane tmp(w, h);
  for (int y = 0; y < h; ++y) {
    auto src = p.row(y);
    auto dst = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * src[std::clamp(x + k, 0, w - 1)];
      }
      dst[x] = acc;
    }
  }
  RealPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (int k = -radius; k <= radius; ++k) {
      auto src = tmp.row(std::clamp(y + k, 0, h - 1));
      const double wk = kernel[k + radius];
      for (int x = 0; x < w; ++x) dst[x] += wk * src[x];
    }
  }
  return out;
}

void CannyParams::validate() const {
  if (!(low_threshold > 0.0) || !(high_threshold > low_threshold)) {
    throw ArgumentError("Canny thresholds must satisfy 0 < low < high");
  }
  if (mode == ThresholdMode::FractionOfMax && high_threshold > 1.0) {
    throw ArgumentError("fractional Canny thresholds must not exceed 1");
  }
  if (gaussian_sigma < 0.0) {
    throw ArgumentError("Canny sigma must be non-negative");
  }
}

template <typename T>
GradientField canny_gradient(const Plane<T>& p, double sigma) {
  const RealPlane blurred = gaussian_blur(to_unit_plane(p), sigma);
  GradientField g;
  sobel_components(blurred, g.gx, g.gy);
  g.magnitude = hypot_plane(g.gx, g.gy);
  return g;
}

template <typename T>
GrayPlane canny(const Plane<T>& p, const CannyParams& params) {
  params.validate();
  if (p.width() < 5 || p.height() < 5) {
    throw ArgumentError("canny needs a plane of at least 5x5");
  }
  const GradientField g = canny_gradient(p, params.gaussian_sigma);
  const int h = p.height();
  const int w = p.width();
  GrayPlane out(w, h);

  double low = params.low_threshold;
  double high = params.high_threshold;
  if (params.mode == ThresholdMode::FractionOfMax) {
    const double peak = g.magnitude.max_value();
    if (peak <= 0.0) return out;
    low *= peak;
    high *= peak;
  }

  // Non-maximum suppression along the gradient direction quantized to 45
  // degrees. Ties go to the pixel further along the direction so plateaus
  // thin to one pixel.
  RealPlane thin(w, h);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double m = g.magnitude.at(y, x);
      if (m <= 0.0) continue;
      double angle = std::atan2(g.gy.at(y, x), g.gx.at(y, x)) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      int dr = 0;
      int dc = 0;
      if (angle < 22.5 || angle >= 157.5) {
        dc = 1;
      } else if (angle < 67.5) {
        dr = 1;
        dc = 1;
      } else if (angle < 112.5) {
        dr = 1;
      } else {
        dr = 1;
        dc = -1;
      }
      const double before = g.magnitude.at(y - dr, x - dc);
      const double after = g.magnitude.at(y + dr, x + dc);
      if (m > before && m >= after) thin.at(y, x) = m;
    }
  }

  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (thin.at(y, x) >= high && out.at(y, x) == 0) {
        out.at(y, x) = 255;
        stack.emplace_back(y, x);
        while (!stack.empty()) {
          auto [cy, cx] = stack.back();
          stack.pop_back();
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int ny = cy + dy;
              const int nx = cx + dx;
              if (!out.contains(ny, nx) || out.at(ny, nx) != 0) continue;
              if (thin.at(ny, nx) >= low && thin.at(ny, nx) > 0.0) {
                out.at(ny, nx) = 255;
                stack.emplace_back(ny, nx);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
GrayPlane binarize(const Plane<T>& p, double threshold, Polarity polarity) {
  GrayPlane out(p.width(), p.height());
  auto src = p.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = unit_sample(src[i]);
    const bool fg = polarity == Polarity::DarkForeground ? v < threshold : v >= threshold;
    dst[i] = fg ? 255 : 0;
  }
  return out;
}

std::vector<double> smooth_1d(std::span<const double> signal, int window, int passes) {
  if (window < 1 || window % 2 == 0) {
    throw ArgumentError("smoothing window must be odd and positive");
  }
  if (static_cast<std::size_t>(window) > signal.size()) {
    throw ArgumentError("smoothing window longer than the signal");
  }
  if (passes < 0) {
    throw ArgumentError("smoothing passes must be non-negative");
  }
  std::vector<double> cur(signal.begin(), signal.end());
  const int n = static_cast<int>(cur.size());
  const int half = window / 2;
  std::vector<double> prefix(cur.size() + 1);
  for (int pass = 0; pass < passes && window > 1; ++pass) {
    prefix[0] = 0.0;
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + cur[i];
    std::vector<double> next(cur.size());
    for (int i = 0; i < n; ++i) {
      const int lo = std::max(0, i - half);
      const int hi = std::min(n - 1, i + half);
      next[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
    }
    cur = std::move(next);
  }
  return cur;
}

PeakSet find_peaks(std::span<const double> signal, double min_prominence_fraction,
                   int min_separation) {
  PeakSet result;
  const int n = static_cast<int>(signal.size());
  if (n < 3) return result;
  const double global_max = *std::max_element(signal.begin(), signal.end());
  if (!(global_max > 0.0)) return result;
  const double floor = min_prominence_fraction * global_max;

  struct Candidate {
    int pos;
    double height;
  };
  std::vector<Candidate> candidates;
  int i = 1;
  while (i < n - 1) {
    if (signal[i] > signal[i - 1]) {
      int j = i;
      while (j + 1 < n && signal[j + 1] == signal[i]) ++j;
      if (j + 1 < n && signal[j + 1] < signal[i] && signal[i] >= floor && signal[i] > 0.0) {
        candidates.push_back({(i + j) / 2, signal[i]});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.height > b.height; });
  std::vector<Candidate> accepted;
  for (const Candidate& c : candidates) {
    const bool clear = std::all_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
      return std::abs(a.pos - c.pos) >= min_separation;
    });
    if (clear) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.pos < b.pos; });
  for (const Candidate& c : accepted) {
    result.positions.push_back(c.pos);
    result.heights.push_back(c.height);
  }
  return result;
}

template <typename T>
std::vector<double> row_sums(const Plane<T>& p) {
  std::vector<double> sums(static_cast<std::size_t>(p.height()));
  for (int y = 0; y < p.height(); ++y) {
    auto r = p.row(y);
    sums[y] = std::accumulate(r.begin(), r.end(), 0.0);
  }
  return sums;
}

#define EMOREC_EDGES_INSTANTIATE(T)                                            \
  template RealPlane sobel_magnitude<T>(const Plane<T>&);                      \
  template GradientField canny_gradient<T>(const Plane<T>&, double);           \
  template GrayPlane canny<T>(const Plane<T>&, const CannyParams&);            \
  template GrayPlane binarize<T>(const Plane<T>&, double, Polarity);           \
  template std::vector<double> row_sums<T>(const Plane<T>&);

EMOREC_EDGES_INSTANTIATE(std::uint8_t)
EMOREC_EDGES_INSTANTIATE(double)

#undef EMOREC_EDGES_INSTANTIATE

}  // namespace emorec::edges
