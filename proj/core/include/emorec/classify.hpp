#pragma once

#include <array>
#include <bitset>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "emorec/feature_vector.hpp"

namespace emorec::classify {

/// Rule-table emotions, in rule-table row order (also the tie-break order).
enum class Emotion { Disgust = 0, Surprise, Angry, Neutral, Happy };
inline constexpr int kEmotionCount = 5;
inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::Disgust, Emotion::Surprise, Emotion::Angry, Emotion::Neutral, Emotion::Happy};

/// Feature columns of the accuracy and weight tables.
enum class Feature { EBM = 0, LC, EBC, W, MO };
inline constexpr int kFeatureCount = 5;
inline constexpr std::array<Feature, kFeatureCount> kFeatures = {Feature::EBM, Feature::LC,
                                                                 Feature::EBC, Feature::W,
                                                                 Feature::MO};

std::string_view to_string(Emotion e);
std::string_view to_string(Feature f);
/// Case-insensitive; nullopt for labels outside the five-emotion set.
std::optional<Emotion> parse_emotion(std::string_view s);

double feature_value(const FeatureVector& fv, Feature f);

enum class Side { Low, High };

/// High iff value >= threshold.
constexpr Side side(double value, double threshold) {
  return value >= threshold ? Side::High : Side::Low;
}

struct Thresholds {
  double mo = 25.0;
  double lc = 50.0;
  double w = 200.0;
  double ebc = 0.5;
  double ebm = 0.7;

  double of(Feature f) const;
};

/// Threshold predicates per emotion row.
class RuleTable {
 public:
  using Row = std::array<Side, kFeatureCount>;  // indexed by Feature

  /// Throws ArgumentError unless every threshold is strictly positive.
  explicit RuleTable(Thresholds t = {});

  const Thresholds& thresholds() const { return thresholds_; }
  const Row& row(Emotion e) const { return rows_[static_cast<int>(e)]; }
  std::array<Side, kFeatureCount> sides(const FeatureVector& fv) const;

  /// One line per emotion, e.g. "Happy: MO>=25 LC>=50 W<200 EBC>=0.5 EBM>=0.7".
  std::string describe() const;

 private:
  Thresholds thresholds_;
  std::array<Row, kEmotionCount> rows_;
};

using AccuracyTable = std::array<std::array<double, kFeatureCount>, kEmotionCount>;

/// Per-feature accuracy (%) of each individual feature classifier, rows in
/// emotion order, columns EBM, LC, EBC, W, MO.
const AccuracyTable& published_accuracy();

class WeightMatrix {
 public:
  using Grid = std::array<std::array<double, kFeatureCount>, kEmotionCount>;

  /// Checked: entries must be >= 0 and each row must sum to 1 within 1e-9.
  static WeightMatrix from_grid(const Grid& g);
  /// Only non-negativity is enforced.
  static WeightMatrix from_grid_unchecked(const Grid& g);

  double at(Emotion e, Feature f) const { return grid_[static_cast<int>(e)][static_cast<int>(f)]; }
  const Grid& grid() const { return grid_; }
  double row_sum(Emotion e) const;
  bool normalized(double tol = 1e-9) const;

  std::string describe() const;

 private:
  explicit WeightMatrix(const Grid& g) : grid_(g) {}
  Grid grid_;
};

/// weight = accuracy / row sum of accuracies. Non-positive accuracy is an ArgumentError.
WeightMatrix compute_weights(const AccuracyTable& acc);

/// compute_weights(published_accuracy()).
const WeightMatrix& default_weights();

/// Weights exactly as printed in the published WMV weight table (Disgust and
/// Happy rows; the other rows come from compute_weights). The Disgust row
/// sums to 1.051, so this matrix is not normalized.
const WeightMatrix& printed_weights_preset();

using EmotionSet = std::bitset<kEmotionCount>;

/// For each feature (indexed by Feature), the emotions whose rule predicate it satisfies.
struct VoteProfile {
  std::array<EmotionSet, kFeatureCount> votes;
};

enum class Method { Rules, MV, WMV };
std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct Decision {
  Emotion label = Emotion::Disgust;
  Method method = Method::Rules;
  std::array<double, kEmotionCount> scores{};
  bool fallback_used = false;
};

/// Exact row match, else the row at minimum Hamming distance (ties by row
/// order) with fallback_used set. Scores are the number of agreeing predicates.
Decision rule_classify(const FeatureVector& fv, const RuleTable& rules);

VoteProfile feature_votes(const FeatureVector& fv, const RuleTable& rules);

/// score(e) = sum of wm[e][f] over features whose vote set contains e;
/// argmax with ties by row order. fallback_used is set when every score is 0.
Decision weighted_majority_vote(const VoteProfile& vp, const WeightMatrix& wm);

/// Emotion named by at least three features wins (ties by WMV score, then
/// row order); otherwise WMV decides and fallback_used is set.
Decision majority_vote(const VoteProfile& vp, const WeightMatrix& wm);

Decision decide(const FeatureVector& fv, Method method, const RuleTable& rules, const WeightMatrix& wm);

/// 100 * correct / total. Throws ArgumentError on empty input.
struct Labeled {
  Emotion truth;
  Emotion predicted;
};
double accuracy(std::span<const Labeled> items);

}  // namespace emorec::classify
