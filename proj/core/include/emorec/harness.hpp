#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emorec/classify.hpp"
#include "emorec/config.hpp"
#include "emorec/feature_vector.hpp"
#include "emorec/plane.hpp"

namespace emorec::harness {

// --- manifests -------------------------------------------------------------

/// One manifest row. `label` is kept verbatim; "skip" marks rows to ignore.
struct ManifestRow {
  std::string path;
  std::string label;
  std::optional<FeatureVector> truth;  ///< present in generated manifests
};

/// Reads a CSV whose header starts with `path,emotion`; the optional columns
/// mo,lc,w,ebc,ebm are parsed as ground truth. Throws IoError when the file
/// is unreadable, ArgumentError("malformed manifest ...") otherwise, including
/// for a manifest with no rows.
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
std::vector<ManifestRow> parse_manifest(const std::string& text);

/// Writes `path,emotion,mo,lc,w,ebc,ebm` (truth columns empty when absent).
std::string format_manifest(const std::vector<ManifestRow>& rows);

// --- single image ----------------------------------------------------------

struct Classification {
  FeatureVector features;
  classify::Decision decision;
};

Classification classify_image(const ColorImage& image, classify::Method method, const Config& cfg,
                              const std::optional<Rect>& face_rect = std::nullopt);

/// {"label":..., "method":..., "fallback_used":..., "scores":{...}, "features":{...}}
std::string classification_json(const Classification& c);

// --- evaluation ------------------------------------------------------------

enum class ItemStatus {
  Classified,
  Failed,          ///< unreadable image or extraction failure
  Unclassifiable,  ///< label outside the five emotions
  Skipped,         ///< label "skip"
};
std::string_view to_string(ItemStatus s);

struct ImageRecord {
  std::string path;
  std::string label;  ///< manifest label as given
  std::optional<classify::Emotion> truth;
  ItemStatus status = ItemStatus::Failed;
  std::optional<classify::Decision> decision;
  std::optional<FeatureVector> features;
  std::string failure_stage;  ///< ExtractionError stage, "read" or "error"
  std::string failure;
  double seconds = 0.0;
};

struct EmotionStats {
  int total = 0;       ///< evaluable items with this truth label
  int classified = 0;  ///< total minus failures
  int failed = 0;
  int correct = 0;
  /// 100 * correct / total; failures count against. nullopt when total == 0.
  std::optional<double> accuracy;
};

struct EvalReport {
  classify::Method method = classify::Method::WMV;
  std::vector<ImageRecord> records;  ///< manifest order
  std::array<EmotionStats, classify::kEmotionCount> per_emotion{};
  /// confusion[truth][predicted] over classified items.
  std::array<std::array<int, classify::kEmotionCount>, classify::kEmotionCount> confusion{};
  int total = 0;  ///< evaluable items (five-emotion labels)
  int failed = 0;
  int unclassifiable = 0;
  int skipped = 0;
  /// 100 * trace(confusion) / total; nullopt when total == 0.
  std::optional<double> overall_accuracy;
  double median_seconds = 0.0;
  double mean_seconds = 0.0;
};

struct EvalOptions {
  classify::Method method = classify::Method::WMV;
  int threads = 1;
};

/// Classifies every manifest row (paths relative to `corpus_dir`) on a pool
/// of `threads` workers; results are merged in manifest order.
EvalReport evaluate(const std::filesystem::path& corpus_dir, const std::vector<ManifestRow>& rows,
                    const Config& cfg, const EvalOptions& options = {});

/// Report JSON. Timing fields are left out when `include_timing` is false,
/// which makes the output byte-identical across runs.
std::string report_json(const EvalReport& report, bool include_timing = true);

/// Per-emotion table, overall accuracy and confusion matrix as plain text.
std::string report_table(const EvalReport& report);

// --- explain ---------------------------------------------------------------

/// Artifact file names written by explain, in order.
const std::vector<std::string>& explain_artifacts();

/// Runs the pipeline on `image` and writes the nine inspection artifacts into
/// `out_dir` (created if needed). Returns the written paths.
std::vector<std::filesystem::path> explain(const ColorImage& image,
                                           const std::filesystem::path& out_dir,
                                           const Config& cfg,
                                           const std::optional<Rect>& face_rect = std::nullopt);

// --- gen -------------------------------------------------------------------

/// Writes generate_suite(count, seed) as PNGs plus manifest.csv into
/// `out_dir`. Returns the manifest rows.
std::vector<ManifestRow> gen(int count, std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace emorec::harness
