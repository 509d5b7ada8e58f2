#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emorec/classify.hpp"
#include "emorec/feature_vector.hpp"
#include "emorec/locate.hpp"
#include "emorec/plane.hpp"

namespace emorec::synth {

/// Palette of the stylized faces.
namespace palette {
inline constexpr Rgb kSkin{224, 172, 140};
inline constexpr Rgb kEye{255, 120, 60};  // high Cr, low Cb
inline constexpr Rgb kBrow{60, 40, 30};
inline constexpr Rgb kLip{150, 30, 50};
inline constexpr Rgb kCavity{40, 10, 15};
inline constexpr Rgb kFurrow{120, 80, 65};
}  // namespace palette

inline constexpr int kBrowThickness = 5;
inline constexpr int kBrowLength = 41;      // columns per brow
inline constexpr int kBrowInnerGap = 5;     // columns between brow and eye column
inline constexpr int kFurrowThickness = 2;
inline constexpr int kFurrowSpacing = 8;     // default row pitch of the furrows
inline constexpr int kFurrowMargin = 3;     // rows kept clear of the wrinkle and brow window edges
inline constexpr int kLipBandOpen = 7;      // rows per lip when the mouth is open
inline constexpr int kLipBandClosed = 9;    // rows of the closed-mouth lip band
inline constexpr int kEyeSemiRows = 4;
inline constexpr int kEyeSemiCols = 12;

/// Parameters of one synthetic face on the 381 x 281 frame.
struct FaceSpec {
  classify::Emotion emotion = classify::Emotion::Neutral;
  int mouth_open_rows = 0;         ///< distance between lip centers; 0 = closed
  int corner_span = 30;            ///< column distance between mouth corners
  int mouth_row = 303;             ///< frame row of the mouth center
  std::vector<int> brow_heights;   ///< kBrowLength stroke-top rows, relative to the brow window
  int furrow_count = 0;
  int furrow_length = 0;
  int furrow_spacing = kFurrowSpacing;
  locate::EyePair eye_centers{{150, 80}, {150, 200}};
  std::uint64_t seed = 0;
  double blur_sigma = 1.0;
  bool occlude_right_eye = false;  ///< paint skin over the right eye and brow
};

/// Feature values the construction implies (before any extraction).
FeatureVector implied_features(const FaceSpec& spec);

/// Throws ArgumentError when the implied features are not inside the target
/// emotion's rule region with a 10% margin on every threshold, or when the
/// geometry leaves the frame.
void validate_spec(const FaceSpec& spec, const classify::Thresholds& t = {});

struct GeneratedFace {
  ColorImage image;
  FeatureVector truth;
};

GeneratedFace generate_face(const FaceSpec& spec);

/// Randomized spec for `emotion` inside its margin region.
FaceSpec random_spec(classify::Emotion emotion, std::uint64_t seed);

struct SuiteItem {
  std::string name;  ///< e.g. "happy_003.png"
  ColorImage image;
  classify::Emotion emotion;
  FeatureVector truth;
};

/// `count` faces per emotion, emotions in rule-table order. Deterministic in `seed`.
std::vector<SuiteItem> generate_suite(int count, std::uint64_t seed);

/// A lips-sized patch (width x height) with the mouth drawn at `center_row`,
/// spanning `corner_span` columns around the middle column. `open_rows` = 0
/// draws a single closed band, otherwise two lip bands that far apart.
ColorImage lips_patch(int width, int height, int center_row, int corner_span, int open_rows,
                      double blur_sigma = 1.0);

}  // namespace emorec::synth
