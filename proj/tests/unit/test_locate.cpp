#include <gtest/gtest.h>

#include <cmath>

#include "emorec/locate.hpp"
#include "emorec/raster.hpp"

using namespace emorec;

namespace {

RealPlane two_blob_map(int w, int h, int row, int left_col, int right_col) {
  RealPlane m(w, h);
  for (int r = row - 2; r <= row + 2; ++r) {
    for (int c = -4; c <= 4; ++c) {
      m.at(r, left_col + c) = 1.0;
      m.at(r, right_col + c) = 0.9;
    }
  }
  return m;
}

}  // namespace

TEST(EyeMap, ClosedForm) {
  const double cr = 0.6, cb = 0.3;
  const double expected = cr * cr * std::pow(cr * cr - cr / cb, 4);
  EXPECT_NEAR(locate::eye_map_value(cr, cb), expected, 1e-12);
  // Cb is clamped below so the ratio stays finite.
  EXPECT_TRUE(std::isfinite(locate::eye_map_value(0.5, 0.0)));
  EXPECT_DOUBLE_EQ(locate::eye_map_value(0.5, 0.0), locate::eye_map_value(0.5, locate::kMinUnitCb));
}

TEST(EyeMap, RescaledToUnitMax) {
  ColorImage img(8, 8, Rgb{200, 150, 120});
  img.at(3, 3) = Rgb{255, 60, 30};
  const RealPlane m = locate::eye_map(raster::to_ycbcr(img));
  EXPECT_DOUBLE_EQ(m.max_value(), 1.0);
  EXPECT_GE(m.min_value(), 0.0);
}

TEST(LocateEyes, FindsCentroids) {
  const RealPlane m = two_blob_map(281, 381, 150, 80, 200);
  const auto eyes = locate::locate_eyes(m);
  EXPECT_DOUBLE_EQ(eyes.left.row, 150);
  EXPECT_DOUBLE_EQ(eyes.left.col, 80);
  EXPECT_DOUBLE_EQ(eyes.right.row, 150);
  EXPECT_DOUBLE_EQ(eyes.right.col, 200);
}

TEST(LocateEyes, IgnoresBlobsOutsideBand) {
  RealPlane m = two_blob_map(281, 381, 150, 80, 200);
  m.at(20, 140) = 1.0;   // above the band
  m.at(300, 10) = 1.0;   // below it
  const auto eyes = locate::locate_eyes(m);
  EXPECT_DOUBLE_EQ(eyes.left.col, 80);
  EXPECT_DOUBLE_EQ(eyes.right.col, 200);
}

TEST(LocateEyes, SingleBlobFails) {
  RealPlane m(281, 381);
  m.at(150, 80) = 1.0;
  try {
    locate::locate_eyes(m);
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.stage(), "locate_eyes");
  }
  EXPECT_THROW(locate::locate_eyes(RealPlane(281, 381)), ExtractionError);
}

TEST(Regions, DefaultGeometry) {
  const locate::EyePair eyes{{150, 80}, {150, 200}};
  const auto reg = locate::derive_regions(eyes, 281, 381);
  // half width lround(0.35 * 281 / 2) = 49; rows lround(150 - 68.58), lround(150 - 7.62)
  EXPECT_EQ(reg.left_brow, (Rect{31, 81, 99, 61}));
  EXPECT_EQ(reg.right_brow, (Rect{151, 81, 99, 61}));
  // columns 80..200 inclusive; rows lround(150 - 95.25), lround(150 - 19.05)
  EXPECT_EQ(reg.wrinkle, (Rect{80, 55, 121, 76}));
  EXPECT_EQ(reg.lips, (Rect{0, 249, 281, 132}));
  EXPECT_EQ(locate::lips_rect(281, 381), reg.lips);
}

TEST(Regions, MirrorSymmetry) {
  const locate::EyePair eyes{{148, 77}, {148, 203}};
  const auto reg = locate::derive_regions(eyes, 281, 381);
  // mirroring maps column c to 280 - c
  EXPECT_EQ(reg.left_brow.x0, 280 - (reg.right_brow.x1() - 1));
  EXPECT_EQ(reg.left_brow.w, reg.right_brow.w);
  EXPECT_EQ(reg.wrinkle.x0, 280 - (reg.wrinkle.x1() - 1));
}

TEST(Regions, ClampedAndEmpty) {
  const auto reg = locate::derive_regions({{150, 10}, {150, 270}}, 281, 381);
  EXPECT_TRUE(reg.left_brow.fits_in(281, 381));
  EXPECT_EQ(reg.left_brow.x0, 0);
  EXPECT_THROW(locate::derive_regions({{2, 80}, {2, 200}}, 281, 381), ExtractionError);
}

TEST(LocateParams, Validation) {
  locate::LocateParams p;
  p.band_top = 0.6;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.threshold_fraction = 0.0;
  EXPECT_THROW(p.validate(), ArgumentError);
}

TEST(EyeMap, Examples) {
  EXPECT_DOUBLE_EQ(locate::eye_map_value(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(locate::eye_map_value(0.0, 0.4), 0.0);
  EXPECT_NEAR(locate::eye_map_value(0.5, 1.0), 0.25 * 0.00390625, 1e-15);
}

TEST(LocateEyes, MirrorSwapsEyes) {
  const RealPlane m = two_blob_map(281, 381, 150, 70, 190);
  const auto a = locate::locate_eyes(m);
  const auto b = locate::locate_eyes(raster::mirror(m));
  EXPECT_DOUBLE_EQ(b.left.col, 280 - a.right.col);
  EXPECT_DOUBLE_EQ(b.right.col, 280 - a.left.col);
  EXPECT_DOUBLE_EQ(b.left.row, a.right.row);
}

TEST(Regions, WrinkleSpansEyeColumns) {
  const auto reg = locate::derive_regions({{150, 90}, {150, 190}}, 281, 381);
  EXPECT_EQ(reg.wrinkle.x0, 90);
  EXPECT_EQ(reg.wrinkle.x1() - 1, 190);
  EXPECT_EQ(reg.lips.y0, 249);
  EXPECT_EQ(reg.lips.y1(), 381);
}
