#include <gtest/gtest.h>

#include "emorec/classify.hpp"
#include "emorec/synthcorpus.hpp"

using namespace emorec;
using classify::Emotion;

namespace {

std::vector<int> zigzag(int base, int amp) {
  std::vector<int> h(synth::kBrowLength);
  for (int i = 0; i < synth::kBrowLength; ++i) h[i] = base + amp - std::abs(i % (2 * amp) - amp);
  return h;
}

}  // namespace

TEST(Synth, HappyExample) {
  synth::FaceSpec spec;
  spec.emotion = Emotion::Happy;
  spec.mouth_open_rows = 40;
  spec.corner_span = 80;
  spec.brow_heights = zigzag(44, 6);
  const auto face = synth::generate_face(spec);
  EXPECT_EQ(face.image.width(), 281);
  EXPECT_EQ(face.image.height(), 381);
  EXPECT_EQ(face.truth.mo, 40);
  EXPECT_EQ(face.truth.lc, 80);
  EXPECT_EQ(face.truth.w, 0);
  const auto d = classify::rule_classify(face.truth, classify::RuleTable{});
  EXPECT_EQ(d.label, Emotion::Happy);
  EXPECT_FALSE(d.fallback_used);
}

TEST(Synth, DisgustExampleWithFourFurrows) {
  synth::FaceSpec spec;
  spec.emotion = Emotion::Disgust;
  spec.corner_span = 30;
  // V-shaped brow, low in the window
  spec.brow_heights.resize(synth::kBrowLength);
  for (int i = 0; i < synth::kBrowLength; ++i) spec.brow_heights[i] = 24 + std::abs(i - 20) / 8;
  spec.furrow_count = 4;
  spec.furrow_spacing = 6;
  spec.furrow_length = 60;
  const auto face = synth::generate_face(spec);
  EXPECT_EQ(face.truth.w, 4 * 2 * (60 + 2));
  const auto d = classify::rule_classify(face.truth, classify::RuleTable{});
  EXPECT_EQ(d.label, Emotion::Disgust);
  EXPECT_FALSE(d.fallback_used);
}

TEST(Synth, ImpliedCurvatureAndPosition) {
  synth::FaceSpec spec;
  spec.brow_heights = std::vector<int>(synth::kBrowLength, 10);
  spec.brow_heights[20] = 13;
  const auto fv = synth::implied_features(spec);
  EXPECT_DOUBLE_EQ(fv.ebc, 6.0 / synth::kBrowLength);
  // stroke center is 2 rows below the top; brow window is 61 rows for eyes on row 150
  const double mean_top = (10.0 * 40 + 13.0) / 41;
  EXPECT_NEAR(fv.ebm, (mean_top + 2) / 61, 1e-12);
}

TEST(Synth, ValidationRejectsMarginViolations) {
  synth::FaceSpec spec = synth::random_spec(Emotion::Happy, 1);
  EXPECT_NO_THROW(synth::validate_spec(spec));
  spec.mouth_open_rows = 26;  // above 25 but inside the 10% margin
  EXPECT_THROW(synth::validate_spec(spec), ArgumentError);
  spec = synth::random_spec(Emotion::Happy, 1);
  spec.brow_heights.pop_back();
  EXPECT_THROW(synth::validate_spec(spec), ArgumentError);
  spec = synth::random_spec(Emotion::Angry, 1);
  spec.emotion = Emotion::Surprise;
  EXPECT_THROW(synth::generate_face(spec), ArgumentError);
  spec = synth::random_spec(Emotion::Disgust, 1);
  spec.furrow_count = 6;
  EXPECT_THROW(synth::validate_spec(spec), ArgumentError);
}

TEST(Synth, Deterministic) {
  const auto a = synth::generate_face(synth::random_spec(Emotion::Surprise, 9));
  const auto b = synth::generate_face(synth::random_spec(Emotion::Surprise, 9));
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.truth, b.truth);
  const auto c = synth::generate_face(synth::random_spec(Emotion::Surprise, 10));
  EXPECT_NE(a.image, c.image);
}

TEST(Synth, SuiteShapeAndLabels) {
  const auto suite = synth::generate_suite(4, 3);
  ASSERT_EQ(suite.size(), 20u);
  EXPECT_EQ(suite[0].name, "disgust_000.png");
  EXPECT_EQ(suite[19].name, "happy_003.png");
  const classify::RuleTable rules;
  for (const auto& item : suite) {
    const auto d = classify::rule_classify(item.truth, rules);
    EXPECT_EQ(d.label, item.emotion) << item.name;
    EXPECT_FALSE(d.fallback_used) << item.name;
  }
  const auto again = synth::generate_suite(4, 3);
  for (std::size_t i = 0; i < suite.size(); ++i) EXPECT_EQ(suite[i].image, again[i].image);
  EXPECT_THROW(synth::generate_suite(0, 1), ArgumentError);
}

TEST(Synth, EveryRandomSpecHoldsItsMargins) {
  for (Emotion e : classify::kEmotions) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      EXPECT_NO_THROW(synth::validate_spec(synth::random_spec(e, seed)));
    }
  }
}

TEST(Synth, OcclusionRemovesRightEye) {
  auto spec = synth::random_spec(Emotion::Neutral, 2);
  const auto plain = synth::generate_face(spec);
  spec.occlude_right_eye = true;
  const auto covered = synth::generate_face(spec);
  const int r = static_cast<int>(spec.eye_centers.right.row);
  const int c = static_cast<int>(spec.eye_centers.right.col);
  EXPECT_EQ(covered.image.at(r, c), synth::palette::kSkin);
  EXPECT_NE(plain.image.at(r, c), synth::palette::kSkin);
}
