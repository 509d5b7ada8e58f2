#include "emorec/synthcorpus.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "emorec/edges.hpp"
#include "emorec/raster.hpp"

namespace emorec::synth {

namespace {

using classify::Emotion;

void fill_rect(ColorImage& img, int y0, int y1, int x0, int x1, Rgb color) {
  y0 = std::max(y0, 0);
  x0 = std::max(x0, 0);
  y1 = std::min(y1, img.height());
  x1 = std::min(x1, img.width());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) img.at(y, x) = color;
  }
}

void fill_ellipse(ColorImage& img, double cy, double cx, double ry, double rx, Rgb color) {
  for (int y = static_cast<int>(std::floor(cy - ry)); y <= static_cast<int>(std::ceil(cy + ry)); ++y) {
    for (int x = static_cast<int>(std::floor(cx - rx)); x <= static_cast<int>(std::ceil(cx + rx)); ++x) {
      if (y < 0 || x < 0 || y >= img.height() || x >= img.width()) continue;
      const double dy = (y - cy) / ry;
      const double dx = (x - cx) / rx;
      if (dx * dx + dy * dy <= 1.0) img.at(y, x) = color;
    }
  }
}

ColorImage blur(const ColorImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  RealPlane ch[3] = {RealPlane(img.width(), img.height()), RealPlane(img.width(), img.height()),
                     RealPlane(img.width(), img.height())};
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    ch[0].samples()[i] = px[i].r;
    ch[1].samples()[i] = px[i].g;
    ch[2].samples()[i] = px[i].b;
  }
  for (auto& c : ch) c = edges::gaussian_blur(c, sigma);
  ColorImage out(img.width(), img.height());
  auto dst = out.pixels();
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); };
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = Rgb{q(ch[0].samples()[i]), q(ch[1].samples()[i]), q(ch[2].samples()[i])};
  }
  return out;
}

// Mouth corners sit at columns c0 and c0 + span.
void draw_mouth(ColorImage& img, int center_row, int center_col, int span, int open_rows) {
  const int c0 = center_col - span / 2;
  const int c1 = c0 + span + 1;
  if (open_rows <= 0) {
    const int half = kLipBandClosed / 2;
    fill_rect(img, center_row - half, center_row + half + 1, c0, c1, palette::kLip);
    return;
  }
  const int upper = center_row - open_rows / 2;
  const int lower = upper + open_rows;
  const int half = kLipBandOpen / 2;
  fill_rect(img, upper + half + 1, lower - half, c0, c1, palette::kCavity);
  fill_rect(img, upper - half, upper + half + 1, c0, c1, palette::kLip);
  fill_rect(img, lower - half, lower + half + 1, c0, c1, palette::kLip);
}

struct Layout {
  locate::FaceRegions regions;
  int left_brow_x0;   // first column of the left brow stroke
  int right_brow_x0;  // first column of the right brow stroke
  int furrow_row0;
  int center_col;
};

Layout layout_of(const FaceSpec& spec) {
  Layout l;
  l.regions = locate::derive_regions(spec.eye_centers, raster::kFaceCols, raster::kFaceRows);
  const int left_col = static_cast<int>(std::lround(spec.eye_centers.left.col));
  const int right_col = static_cast<int>(std::lround(spec.eye_centers.right.col));
  l.left_brow_x0 = left_col - kBrowInnerGap - kBrowLength + 1;
  l.right_brow_x0 = right_col + kBrowInnerGap;
  // Furrow block centered between the wrinkle window top and the brow windows.
  const int band_top = l.regions.wrinkle.y0 + kFurrowMargin;
  const int band_bottom = std::min(l.regions.left_brow.y0, l.regions.right_brow.y0) - kFurrowMargin;
  const int block = std::max(spec.furrow_count - 1, 0) * spec.furrow_spacing + kFurrowThickness;
  l.furrow_row0 = band_top + (band_bottom - band_top - block) / 2;
  l.center_col = (left_col + right_col) / 2;
  return l;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  int uniform(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform_real(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

bool high_side(Emotion e, classify::Feature f) {
  static const classify::RuleTable rules;
  return rules.row(e)[static_cast<int>(f)] == classify::Side::High;
}

}  // namespace

FeatureVector implied_features(const FaceSpec& spec) {
  FeatureVector fv;
  fv.mo = spec.mouth_open_rows;
  fv.lc = spec.corner_span;
  fv.w = spec.furrow_count * 2.0 * (spec.furrow_length + kFurrowThickness);
  if (spec.brow_heights.size() >= 2) {
    double sum = 0.0;
    for (std::size_t i = 1; i < spec.brow_heights.size(); ++i) {
      sum += std::abs(spec.brow_heights[i] - spec.brow_heights[i - 1]);
    }
    fv.ebc = sum / static_cast<double>(spec.brow_heights.size());
  }
  if (!spec.brow_heights.empty()) {
    const Layout l = layout_of(spec);
    double center = 0.0;
    for (int h : spec.brow_heights) center += h + (kBrowThickness - 1) / 2.0;
    center /= static_cast<double>(spec.brow_heights.size());
    fv.ebm = center / l.regions.left_brow.h;
  }
  return fv;
}

void validate_spec(const FaceSpec& spec, const classify::Thresholds& t) {
  if (static_cast<int>(spec.brow_heights.size()) != kBrowLength) {
    throw ArgumentError("brow profile must have one height per brow column");
  }
  if (spec.eye_centers.left.row != spec.eye_centers.right.row) {
    throw ArgumentError("synthetic faces keep both eyes on one row");
  }
  const Layout l = layout_of(spec);
  const int roi_h = l.regions.left_brow.h;
  for (int h : spec.brow_heights) {
    if (h < 2 || h + kBrowThickness + 2 > roi_h) {
      throw ArgumentError("brow stroke leaves its window");
    }
  }
  if (l.left_brow_x0 < l.regions.left_brow.x0 ||
      l.right_brow_x0 + kBrowLength > l.regions.right_brow.x1()) {
    throw ArgumentError("brow stroke wider than its window");
  }
  if (spec.furrow_count > 0) {
    const int last = l.furrow_row0 + (spec.furrow_count - 1) * spec.furrow_spacing + kFurrowThickness;
    if (l.furrow_row0 < l.regions.wrinkle.y0 + kFurrowMargin ||
        last > l.regions.left_brow.y0 - kFurrowMargin) {
      throw ArgumentError("furrows must sit inside the wrinkle window, above the brows");
    }
    if (spec.furrow_spacing < kFurrowThickness + 4) {
      throw ArgumentError("furrows closer than four rows merge under edge detection");
    }
    if (spec.furrow_length + 6 > l.regions.wrinkle.w) {
      throw ArgumentError("furrows longer than the wrinkle window");
    }
  }
  const Rect lips = locate::lips_rect(raster::kFaceCols, raster::kFaceRows);
  const int mouth_top = spec.mouth_row - spec.mouth_open_rows / 2 - kLipBandClosed;
  const int mouth_bottom = spec.mouth_row + spec.mouth_open_rows / 2 + kLipBandClosed;
  if (mouth_top < lips.y0 + 8 || mouth_bottom > lips.y1() - 30) {
    throw ArgumentError("mouth leaves the lips region");
  }
  if (spec.corner_span < 4 || spec.corner_span > 120) {
    throw ArgumentError("corner span out of range");
  }

  const FeatureVector fv = implied_features(spec);
  for (classify::Feature f : classify::kFeatures) {
    const double v = classify::feature_value(fv, f);
    const double thr = t.of(f);
    const bool ok = high_side(spec.emotion, f) ? v >= 1.1 * thr : v <= 0.9 * thr;
    if (!ok) {
      throw ArgumentError("implied " + std::string(classify::to_string(f)) +
                          " misses the 10% margin of the target emotion");
    }
  }
}

GeneratedFace generate_face(const FaceSpec& spec) {
  validate_spec(spec);
  const Layout l = layout_of(spec);
  ColorImage img(raster::kFaceCols, raster::kFaceRows, palette::kSkin);

  for (const locate::Point& eye : {spec.eye_centers.left, spec.eye_centers.right}) {
    fill_ellipse(img, eye.row, eye.col, kEyeSemiRows, kEyeSemiCols, palette::kEye);
  }

  const int brow_y0 = l.regions.left_brow.y0;
  for (int i = 0; i < kBrowLength; ++i) {
    const int top = brow_y0 + spec.brow_heights[i];
    fill_rect(img, top, top + kBrowThickness, l.left_brow_x0 + i, l.left_brow_x0 + i + 1, palette::kBrow);
    const int top_r = brow_y0 + spec.brow_heights[kBrowLength - 1 - i];
    fill_rect(img, top_r, top_r + kBrowThickness, l.right_brow_x0 + i, l.right_brow_x0 + i + 1,
              palette::kBrow);
  }

  for (int k = 0; k < spec.furrow_count; ++k) {
    const int row = l.furrow_row0 + k * spec.furrow_spacing;
    const int x0 = l.center_col - spec.furrow_length / 2;
    fill_rect(img, row, row + kFurrowThickness, x0, x0 + spec.furrow_length, palette::kFurrow);
  }

  draw_mouth(img, spec.mouth_row, l.center_col, spec.corner_span, spec.mouth_open_rows);

  if (spec.occlude_right_eye) {
    const locate::Point& eye = spec.eye_centers.right;
    const Rect& brow = l.regions.right_brow;
    fill_rect(img, brow.y0, static_cast<int>(eye.row) + 3 * kEyeSemiRows, brow.x0, brow.x1(),
              palette::kSkin);
  }

  return {blur(img, spec.blur_sigma), implied_features(spec)};
}

FaceSpec random_spec(Emotion emotion, std::uint64_t seed) {
  Rng rng(seed);
  FaceSpec s;
  s.emotion = emotion;
  s.seed = seed;
  const int eye_row = rng.uniform(146, 154);
  const int half_gap = rng.uniform(58, 62);
  s.eye_centers = {{double(eye_row), double(140 - half_gap)}, {double(eye_row), double(140 + half_gap)}};
  s.mouth_row = rng.uniform(299, 307);

  switch (emotion) {
    case Emotion::Happy:
      s.mouth_open_rows = rng.uniform(34, 42);
      s.corner_span = rng.uniform(84, 100);
      break;
    case Emotion::Surprise:
      s.mouth_open_rows = rng.uniform(44, 54);
      s.corner_span = rng.uniform(66, 80);
      break;
    default:
      s.mouth_open_rows = 0;
      s.corner_span = rng.uniform(24, 36);
      break;
  }

  if (high_side(emotion, classify::Feature::W)) {
    s.furrow_count = 3;
    s.furrow_length = rng.uniform(56, 76);
  }

  // Brow profile: curved brows zigzag at slope 1; the others are flat or tilted.
  std::vector<int> shape(kBrowLength);
  if (high_side(emotion, classify::Feature::EBC)) {
    const int amp = rng.uniform(5, 7);
    const int phase = rng.uniform(0, 2 * amp - 1);
    for (int i = 0; i < kBrowLength; ++i) {
      const int x = (i + phase) % (2 * amp);
      shape[i] = amp - std::abs(x - amp);
    }
  } else {
    const int run = emotion == Emotion::Angry ? 5 : rng.uniform(8, 14);
    for (int i = 0; i < kBrowLength; ++i) shape[i] = i / run;
  }
  const bool high_brow = high_side(emotion, classify::Feature::EBM);
  const double target = high_brow ? rng.uniform_real(0.80, 0.84) : rng.uniform_real(0.40, 0.52);
  double mean_shape = 0.0;
  for (int v : shape) mean_shape += v;
  mean_shape /= kBrowLength;

  FaceSpec probe = s;
  probe.brow_heights.assign(kBrowLength, 0);
  const int roi_h = layout_of(probe).regions.left_brow.h;
  const int base = static_cast<int>(
      std::lround(target * roi_h - mean_shape - (kBrowThickness - 1) / 2.0));
  s.brow_heights.resize(kBrowLength);
  for (int i = 0; i < kBrowLength; ++i) s.brow_heights[i] = base + shape[i];
  return s;
}

std::vector<SuiteItem> generate_suite(int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("suite needs at least one face per emotion");
  std::vector<SuiteItem> suite;
  suite.reserve(static_cast<std::size_t>(count) * classify::kEmotionCount);
  for (Emotion e : classify::kEmotions) {
    for (int i = 0; i < count; ++i) {
      const std::uint64_t item_seed =
          splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(e) << 32) | static_cast<std::uint32_t>(i)));
      const FaceSpec spec = random_spec(e, item_seed);
      GeneratedFace face = generate_face(spec);
      std::string name(classify::to_string(e));
      for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      char buf[16];
      std::snprintf(buf, sizeof buf, "_%03d.png", i);
      suite.push_back({name + buf, std::move(face.image), e, face.truth});
    }
  }
  return suite;
}

ColorImage lips_patch(int width, int height, int center_row, int corner_span, int open_rows,
                      double blur_sigma) {
  ColorImage img(width, height, palette::kSkin);
  draw_mouth(img, center_row, width / 2, corner_span, open_rows);
  return blur(img, blur_sigma);
}

}  // namespace emorec::synth
