#include "emorec/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "emorec/error.hpp"

namespace emorec::classify {

namespace {

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {"Disgust", "Surprise", "Angry",
                                                                       "Neutral", "Happy"};
constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {"EBM", "LC", "EBC", "W", "MO"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

int idx(Emotion e) { return static_cast<int>(e); }
int idx(Feature f) { return static_cast<int>(f); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Returns the first index of the maximum (row-order tie-break).
int argmax(const std::array<double, kEmotionCount>& scores) {
  return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace

std::string_view to_string(Emotion e) { return kEmotionNames[idx(e)]; }
std::string_view to_string(Feature f) { return kFeatureNames[idx(f)]; }

std::optional<Emotion> parse_emotion(std::string_view s) {
  for (Emotion e : kEmotions) {
    if (iequals(s, to_string(e))) return e;
  }
  return std::nullopt;
}

double feature_value(const FeatureVector& fv, Feature f) {
  switch (f) {
    case Feature::EBM: return fv.ebm;
    case Feature::LC: return fv.lc;
    case Feature::EBC: return fv.ebc;
    case Feature::W: return fv.w;
    case Feature::MO: return fv.mo;
  }
  return 0.0;
}

double Thresholds::of(Feature f) const {
  switch (f) {
    case Feature::EBM: return ebm;
    case Feature::LC: return lc;
    case Feature::EBC: return ebc;
    case Feature::W: return w;
    case Feature::MO: return mo;
  }
  return 0.0;
}

RuleTable::RuleTable(Thresholds t) : thresholds_(t) {
  for (Feature f : kFeatures) {
    if (!(thresholds_.of(f) > 0.0)) {
      throw ArgumentError("rule thresholds must be strictly positive");
    }
  }
  constexpr Side L = Side::Low;
  constexpr Side H = Side::High;
  // Columns:                        EBM LC EBC W  MO
  rows_[idx(Emotion::Disgust)] =  Row{L, L, L, H, L};
  rows_[idx(Emotion::Surprise)] = Row{H, H, H, H, H};
  rows_[idx(Emotion::Angry)] =    Row{L, L, L, L, L};
  rows_[idx(Emotion::Neutral)] =  Row{H, L, H, L, L};
  rows_[idx(Emotion::Happy)] =    Row{H, H, H, L, H};
}

std::array<Side, kFeatureCount> RuleTable::sides(const FeatureVector& fv) const {
  std::array<Side, kFeatureCount> out{};
  for (Feature f : kFeatures) out[idx(f)] = side(feature_value(fv, f), thresholds_.of(f));
  return out;
}

std::string RuleTable::describe() const {
  std::ostringstream os;
  constexpr std::array<Feature, kFeatureCount> order = {Feature::MO, Feature::LC, Feature::W,
                                                        Feature::EBC, Feature::EBM};
  for (Emotion e : kEmotions) {
    os << to_string(e) << ':';
    for (Feature f : order) {
      os << ' ' << to_string(f) << (row(e)[idx(f)] == Side::High ? ">=" : "<")
         << fmt(thresholds_.of(f));
    }
    os << '\n';
  }
  return os.str();
}

const AccuracyTable& published_accuracy() {
  // Rows: Disgust, Surprise, Angry, Neutral, Happy. Columns: EBM, LC, EBC, W, MO.
  static const AccuracyTable table = {{
      {70, 99, 99, 61, 99},
      {80, 98, 98, 63, 96},
      {80, 97, 98, 65, 98},
      {90, 99, 99, 70, 97},
      {75, 98, 90, 67.46, 97},
  }};
  return table;
}

WeightMatrix WeightMatrix::from_grid_unchecked(const Grid& g) {
  for (const auto& row : g) {
    for (double v : row) {
      if (!(v >= 0.0)) throw ArgumentError("weights must be non-negative");
    }
  }
  return WeightMatrix(g);
}

WeightMatrix WeightMatrix::from_grid(const Grid& g) {
  WeightMatrix wm = from_grid_unchecked(g);
  if (!wm.normalized()) {
    throw ArgumentError("every weight row must sum to 1");
  }
  return wm;
}

double WeightMatrix::row_sum(Emotion e) const {
  double s = 0.0;
  for (double v : grid_[idx(e)]) s += v;
  return s;
}

bool WeightMatrix::normalized(double tol) const {
  return std::all_of(kEmotions.begin(), kEmotions.end(),
                     [&](Emotion e) { return std::abs(row_sum(e) - 1.0) <= tol; });
}

std::string WeightMatrix::describe() const {
  std::ostringstream os;
  os << "emotion";
  for (Feature f : kFeatures) os << ' ' << to_string(f);
  os << '\n';
  for (Emotion e : kEmotions) {
    os << to_string(e);
    for (Feature f : kFeatures) os << ' ' << fmt(at(e, f));
    os << '\n';
  }
  return os.str();
}

WeightMatrix compute_weights(const AccuracyTable& acc) {
  WeightMatrix::Grid g{};
  for (int e = 0; e < kEmotionCount; ++e) {
    double total = 0.0;
    for (double a : acc[e]) {
      if (!(a > 0.0)) throw ArgumentError("accuracies must be strictly positive");
      total += a;
    }
    for (int f = 0; f < kFeatureCount; ++f) g[e][f] = acc[e][f] / total;
  }
  return WeightMatrix::from_grid_unchecked(g);
}

const WeightMatrix& default_weights() {
  static const WeightMatrix wm = compute_weights(published_accuracy());
  return wm;
}

const WeightMatrix& printed_weights_preset() {
  static const WeightMatrix wm = [] {
    WeightMatrix::Grid g = default_weights().grid();
    g[idx(Emotion::Disgust)] = {0.183, 0.236, 0.236, 0.160, 0.236};
    g[idx(Emotion::Happy)] = {0.1943, 0.2305, 0.1787, 0.1735, 0.222};
    return WeightMatrix::from_grid_unchecked(g);
  }();
  return wm;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Rules: return "rules";
    case Method::MV: return "mv";
    case Method::WMV: return "wmv";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::Rules, Method::MV, Method::WMV}) {
    if (iequals(s, to_string(m))) return m;
  }
  return std::nullopt;
}

Decision rule_classify(const FeatureVector& fv, const RuleTable& rules) {
  const auto s = rules.sides(fv);
  Decision d;
  d.method = Method::Rules;
  for (Emotion e : kEmotions) {
    int agree = 0;
    for (int f = 0; f < kFeatureCount; ++f) agree += rules.row(e)[f] == s[f] ? 1 : 0;
    d.scores[idx(e)] = agree;
  }
  const int best = argmax(d.scores);
  d.label = static_cast<Emotion>(best);
  d.fallback_used = d.scores[best] < kFeatureCount;
  return d;
}

VoteProfile feature_votes(const FeatureVector& fv, const RuleTable& rules) {
  const auto s = rules.sides(fv);
  VoteProfile vp;
  for (int f = 0; f < kFeatureCount; ++f) {
    for (Emotion e : kEmotions) {
      if (rules.row(e)[f] == s[f]) vp.votes[f].set(idx(e));
    }
  }
  return vp;
}

Decision weighted_majority_vote(const VoteProfile& vp, const WeightMatrix& wm) {
  Decision d;
  d.method = Method::WMV;
  for (Emotion e : kEmotions) {
    double score = 0.0;
    for (Feature f : kFeatures) {
      if (vp.votes[idx(f)].test(idx(e))) score += wm.at(e, f);
    }
    d.scores[idx(e)] = score;
  }
  const int best = argmax(d.scores);
  d.label = static_cast<Emotion>(best);
  d.fallback_used = !(d.scores[best] > 0.0);
  return d;
}

Decision majority_vote(const VoteProfile& vp, const WeightMatrix& wm) {
  std::array<int, kEmotionCount> counts{};
  for (const EmotionSet& set : vp.votes) {
    for (int e = 0; e < kEmotionCount; ++e) counts[e] += set.test(e) ? 1 : 0;
  }
  const int top = *std::max_element(counts.begin(), counts.end());
  const Decision weighted = weighted_majority_vote(vp, wm);
  Decision d;
  d.method = Method::MV;
  if (top < 3) {
    d.label = weighted.label;
    d.scores = weighted.scores;
    d.fallback_used = true;
    return d;
  }
  for (int e = 0; e < kEmotionCount; ++e) d.scores[e] = counts[e];
  int best = -1;
  for (int e = 0; e < kEmotionCount; ++e) {
    if (counts[e] != top) continue;
    if (best < 0 || weighted.scores[e] > weighted.scores[best]) best = e;
  }
  d.label = static_cast<Emotion>(best);
  return d;
}

Decision decide(const FeatureVector& fv, Method method, const RuleTable& rules, const WeightMatrix& wm) {
  switch (method) {
    case Method::Rules: return rule_classify(fv, rules);
    case Method::MV: return majority_vote(feature_votes(fv, rules), wm);
    case Method::WMV: return weighted_majority_vote(feature_votes(fv, rules), wm);
  }
  return rule_classify(fv, rules);
}

double accuracy(std::span<const Labeled> items) {
  if (items.empty()) throw ArgumentError("accuracy of an empty set is undefined");
  const auto correct = std::count_if(items.begin(), items.end(),
                                     [](const Labeled& l) { return l.truth == l.predicted; });
  return 100.0 * static_cast<double>(correct) / static_cast<double>(items.size());
}

}  // namespace emorec::classify
