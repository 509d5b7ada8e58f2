#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "emorec/features.hpp"
#include "emorec/raster.hpp"
#include "emorec/synthcorpus.hpp"
#include "oracles.hpp"

using namespace emorec;

namespace {

std::string stage_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ExtractionError& e) {
    return e.stage();
  }
  return "";
}

}  // namespace

TEST(MouthMap, ComputeNMatchesDirectMeans) {
  RealPlane cr(6, 4);
  RealPlane cb(6, 4);
  double sum_sq = 0.0, sum_ratio = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 6; ++c) {
      const bool odd = (r + c) % 2;
      cr.at(r, c) = odd ? 0.7 : 0.4;
      cb.at(r, c) = odd ? 0.35 : 0.6;
      sum_sq += cr.at(r, c) * cr.at(r, c);
      sum_ratio += cr.at(r, c) / cb.at(r, c);
    }
  }
  EXPECT_NEAR(features::compute_n(cr, cb), 0.95 * (sum_sq / 24) / (sum_ratio / 24), 1e-12);
}

TEST(MouthMap, ValueFormula) {
  const double cr = 0.7, cb = 0.4, n = 0.3;
  const double expected = cr * cr * std::pow(cr * cr - n * cr / cb, 2);
  EXPECT_NEAR(features::mouth_map_value(cr, cb, n), expected, 1e-15);
}

TEST(MouthMap, RescaledMapPeaksOnLips) {
  const ColorImage patch = synth::lips_patch(120, 60, 30, 60, 0);
  const RealPlane m = features::mouth_map(raster::to_ycbcr(patch));
  EXPECT_DOUBLE_EQ(m.max_value(), 1.0);
  EXPECT_GT(m.at(30, 60), 0.5);
  EXPECT_LT(m.at(5, 5), 0.1);
}

TEST(MouthOpening, OpenAndClosed) {
  const ChromaImage open = raster::to_ycbcr(synth::lips_patch(281, 132, 66, 80, 40));
  const auto o = features::mouth_opening(open);
  EXPECT_GE(o.peak_count, 2);
  EXPECT_NEAR(o.mo, 40, 4.5);
  EXPECT_EQ(o.row_profile.size(), 132u);
  EXPECT_EQ(o.smoothed.size(), 132u);

  const ChromaImage closed = raster::to_ycbcr(synth::lips_patch(281, 132, 66, 80, 0));
  const auto c = features::mouth_opening(closed);
  EXPECT_EQ(c.peak_count, 1);
  EXPECT_EQ(c.mo, 0.0);
}

TEST(MouthOpening, VerticalMirrorKeepsDistance) {
  const ColorImage patch = synth::lips_patch(281, 132, 60, 80, 30);
  ColorImage flipped(patch.width(), patch.height());
  for (int r = 0; r < patch.height(); ++r) {
    for (int c = 0; c < patch.width(); ++c) flipped.at(r, c) = patch.at(patch.height() - 1 - r, c);
  }
  EXPECT_EQ(features::mouth_opening(raster::to_ycbcr(patch)).mo,
            features::mouth_opening(raster::to_ycbcr(flipped)).mo);
}

TEST(Brows, MeanHighRowOfSingleRow) {
  RealPlane p(10, 20);
  for (int c = 0; c < 10; ++c) p.at(6, c) = 5.0;
  const auto m = features::mean_high_row(p, 1.0);
  ASSERT_TRUE(m.has_value());
  EXPECT_DOUBLE_EQ(*m, 6.0 / 20.0);
  EXPECT_FALSE(features::mean_high_row(RealPlane(10, 20, 3.0), 1.0).has_value());
}

TEST(Brows, MgiiOnFeaturelessWindowFails) {
  EXPECT_EQ(stage_of([] { features::eyebrow_mean_mgii(GrayPlane(30, 20, 128)); }), "eyebrow_mgii");
}

TEST(Brows, MgiiFollowsStrokeHeight) {
  GrayPlane low(40, 40, 220);
  GrayPlane high(40, 40, 220);
  for (int c = 0; c < 40; ++c) {
    for (int r = 0; r < 4; ++r) {
      low.at(28 + r, c) = 40;
      high.at(8 + r, c) = 40;
    }
  }
  EXPECT_GT(features::eyebrow_mean_mgii(low), features::eyebrow_mean_mgii(high) + 0.3);
}

TEST(Brows, FirstForegroundLine) {
  GrayPlane e(4, 5);
  e.at(2, 0) = 255;
  e.at(4, 0) = 255;
  e.at(1, 2) = 255;
  e.at(3, 3) = 255;
  const auto line = features::first_foreground_line(e);
  ASSERT_EQ(line.heights.size(), 4u);
  EXPECT_EQ(line.heights[0], 2);
  EXPECT_FALSE(line.heights[1].has_value());
  EXPECT_EQ(line.heights[2], 1);
  EXPECT_EQ(line.present(), 3);
}

TEST(Brows, CurvatureSkipsGapsAndMatchesOracle) {
  features::BrowLine line;
  line.heights = {0, std::nullopt, 2, 2, std::nullopt, 5};
  EXPECT_DOUBLE_EQ(features::line_curvature(line), oracle::curvature({0, 2, 2, 5}));
  features::BrowLine one;
  one.heights = {3, std::nullopt};
  EXPECT_EQ(stage_of([&] { features::line_curvature(one); }), "eyebrow_dcl");
}

TEST(Brows, CurvatureOfDrawnStrokes) {
  auto stroke = [](const std::vector<int>& tops) {
    ColorImage img(static_cast<int>(tops.size()) + 10, 40, Rgb{224, 172, 140});
    for (std::size_t i = 0; i < tops.size(); ++i) {
      for (int r = 0; r < 5; ++r) img.at(tops[i] + r, static_cast<int>(i) + 5) = Rgb{60, 40, 30};
    }
    return img;
  };
  const double flat = features::eyebrow_curvature_dcl(stroke(std::vector<int>(41, 15)));
  std::vector<int> zig(41);
  for (int i = 0; i < 41; ++i) zig[i] = 12 + std::abs(i % 12 - 6);
  const double curved = features::eyebrow_curvature_dcl(stroke(zig));
  EXPECT_LT(flat, 0.1);
  EXPECT_GT(curved, 0.5);
}

TEST(Corners, MapValue) {
  EXPECT_DOUBLE_EQ(features::corner_map_value(1.0), 0.0);
  EXPECT_DOUBLE_EQ(features::corner_map_value(0.0), 1.0);
  EXPECT_NEAR(features::corner_map_value(0.5), std::pow(0.5, 6), 1e-15);
}

TEST(Corners, HardEdgedBlob) {
  const ColorImage patch = synth::lips_patch(281, 132, 66, 60, 0, 0.0);
  const auto mc = features::mouth_corners(raster::to_ycbcr(patch));
  // disk dilation of the luminance eats lip_dilation_radius columns at each end
  EXPECT_DOUBLE_EQ(mc.lc, 60 - 2 * 2);
  EXPECT_DOUBLE_EQ(mc.left.row, mc.right.row);
  EXPECT_LT(mc.left.col, mc.right.col);
}

TEST(Corners, SupportMaskExcludesBlackedOutPixels) {
  ColorImage patch = synth::lips_patch(100, 40, 20, 30, 0, 0.0);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 5; ++c) patch.at(r, c) = Rgb{};
  }
  GrayPlane support(100, 40, 255);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 5; ++c) support.at(r, c) = 0;
  }
  const auto chroma = raster::to_ycbcr(patch);
  EXPECT_LT(features::mouth_corners(chroma).left.col, 5);
  const auto masked = features::mouth_corners(chroma, {}, &support);
  EXPECT_NEAR(masked.lc, 30 - 4, 1e-12);
}

TEST(Corners, WhiteLipsFail) {
  const ColorImage white(50, 30, Rgb{255, 255, 255});
  EXPECT_EQ(stage_of([&] { features::mouth_corners(raster::to_ycbcr(white)); }), "mouth_corners");
}

TEST(Wrinkles, CountsEdgePixels) {
  EXPECT_EQ(features::wrinkle_intensity(GrayPlane(60, 40, 180)), 0);
  GrayPlane lines(80, 40, 180);
  for (int c = 10; c < 70; ++c) {
    lines.at(15, c) = lines.at(16, c) = 90;
  }
  const long w = features::wrinkle_intensity(lines);
  EXPECT_GT(w, 100);
  EXPECT_EQ(features::wrinkle_intensity(raster::mirror(lines)), w);
}

TEST(FeatureParams, Validation) {
  features::FeatureParams p;
  p.smoothing_window = 8;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.lip_dilation_radius = 0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.peak_fraction = 1.5;
  EXPECT_THROW(p.validate(), ArgumentError);
}

TEST(AnalyzeFace, RecoversSyntheticTruth) {
  for (auto e : classify::kEmotions) {
    const auto spec = synth::random_spec(e, 42 + static_cast<int>(e));
    const auto face = synth::generate_face(spec);
    const auto a = features::analyze_face(face.image);
    EXPECT_NEAR(a.eyes.left.col, spec.eye_centers.left.col, 1.5);
    EXPECT_NEAR(a.eyes.right.row, spec.eye_centers.right.row, 1.5);
    EXPECT_NEAR(a.features.mo, face.truth.mo, 4.5);
    EXPECT_NEAR(a.features.lc, face.truth.lc, 8.0);
    EXPECT_EQ(a.features.w, face.truth.w);
    EXPECT_NEAR(a.features.ebm, face.truth.ebm, 0.02);
    EXPECT_EQ(a.features.ebc >= 0.5, face.truth.ebc >= 0.5);
  }
}

TEST(AnalyzeFace, FaceRectSelectsEmbeddedFace) {
  const auto face = synth::generate_face(synth::random_spec(classify::Emotion::Happy, 8));
  ColorImage canvas(400, 500, Rgb{30, 90, 30});
  for (int r = 0; r < face.image.height(); ++r) {
    for (int c = 0; c < face.image.width(); ++c) canvas.at(r + 60, c + 50) = face.image.at(r, c);
  }
  const Rect rect{50, 60, face.image.width(), face.image.height()};
  EXPECT_EQ(features::extract_features(canvas, {}, rect), features::extract_features(face.image));
  EXPECT_EQ(stage_of([&] { features::extract_features(canvas, {}, Rect{300, 0, 200, 100}); }),
            "preprocess");
}

TEST(AnalyzeFace, OccludedEyeFailsAtLocation) {
  auto spec = synth::random_spec(classify::Emotion::Neutral, 5);
  spec.occlude_right_eye = true;
  const auto face = synth::generate_face(spec);
  EXPECT_EQ(stage_of([&] { features::analyze_face(face.image); }), "locate_eyes");
}

TEST(AnalyzeFace, Deterministic) {
  const auto face = synth::generate_face(synth::random_spec(classify::Emotion::Surprise, 77));
  EXPECT_EQ(features::extract_features(face.image), features::extract_features(face.image));
}

TEST(MouthMap, CheckerboardN) {
  RealPlane cr(4, 4);
  const RealPlane cb(4, 4, 0.5);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) cr.at(r, c) = (r + c) % 2 ? 0.8 : 0.4;
  }
  // mean cr^2 = 0.40, mean cr/cb = 1.2
  EXPECT_NEAR(features::compute_n(cr, cb), 0.95 * 0.40 / 1.2, 1e-12);
  EXPECT_NEAR(features::compute_n(RealPlane(3, 3, 1.0), RealPlane(3, 3, 1.0)), 0.95, 1e-15);
}

TEST(MouthMap, LipRegionOutshinesSkin) {
  RealPlane cr(10, 4, 0.6);
  RealPlane cb(10, 4, 0.6);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 5; ++c) {
      cr.at(r, c) = 0.8;
      cb.at(r, c) = 0.5;
    }
  }
  const RealPlane m = features::mouth_map_raw(cr, cb);
  EXPECT_GT(m.at(1, 1), m.at(1, 8));
  EXPECT_DOUBLE_EQ(features::mouth_map_value(0.0, 0.5, 0.3), 0.0);
}

TEST(MouthOpening, BlankSkinHasNoPeaks) {
  const ColorImage skin(281, 132, synth::palette::kSkin);
  const auto o = features::mouth_opening(raster::to_ycbcr(skin));
  EXPECT_EQ(o.peak_count, 0);
  EXPECT_EQ(o.mo, 0.0);
}

TEST(Brows, MeanHighRowExamples) {
  RealPlane p(8, 20);
  for (int c = 0; c < 8; ++c) p.at(14, c) = 1.0;
  EXPECT_DOUBLE_EQ(*features::mean_high_row(p, 1.0), 0.7);
  RealPlane top(8, 20);
  for (int c = 0; c < 8; ++c) top.at(0, c) = 1.0;
  EXPECT_DOUBLE_EQ(*features::mean_high_row(top, 1.0), 0.0);
}

TEST(Corners, MapDecreasesWithLuminance) {
  double prev = 2.0;
  for (int v = 0; v <= 255; ++v) {
    const double m = features::corner_map_value(v / 255.0);
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(Corners, MirrorSwapsCorners) {
  const ColorImage patch = synth::lips_patch(281, 132, 66, 71, 0, 0.0);
  const auto a = features::mouth_corners(raster::to_ycbcr(patch));
  const auto b = features::mouth_corners(raster::to_ycbcr(raster::mirror(patch)));
  EXPECT_DOUBLE_EQ(b.left.col, 280 - a.right.col);
  EXPECT_DOUBLE_EQ(b.right.col, 280 - a.left.col);
  EXPECT_DOUBLE_EQ(a.lc, b.lc);
}

TEST(Wrinkles, FurrowsAddEdges) {
  GrayPlane one(120, 60, 180);
  for (int c = 20; c < 100; ++c) one.at(20, c) = one.at(21, c) = 90;
  GrayPlane two = one;
  for (int c = 20; c < 100; ++c) two.at(35, c) = two.at(36, c) = 90;
  const long w1 = features::wrinkle_intensity(one);
  const long w2 = features::wrinkle_intensity(two);
  EXPECT_GT(w2, w1);
  // each two-row furrow of length 80 has about 2 * 82 boundary pixels
  GrayPlane three = two;
  for (int c = 20; c < 100; ++c) three.at(50, c) = three.at(51, c) = 90;
  const long w3 = features::wrinkle_intensity(three);
  EXPECT_NEAR(static_cast<double>(w3), 3 * 2 * 82.0, 0.2 * 3 * 2 * 82.0);
}

TEST(FeatureVector, RangesOnSuite) {
  for (const auto& item : synth::generate_suite(1, 12)) {
    const FeatureVector fv = features::extract_features(item.image);
    EXPECT_GE(fv.mo, 0.0);
    EXPECT_LE(fv.mo, 132.0);
    EXPECT_GE(fv.lc, 0.0);
    EXPECT_GE(fv.w, 0.0);
    EXPECT_GE(fv.ebc, 0.0);
    EXPECT_GE(fv.ebm, 0.0);
    EXPECT_LE(fv.ebm, 1.0);
  }
}
