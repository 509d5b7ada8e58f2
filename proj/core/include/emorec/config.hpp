#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "emorec/classify.hpp"
#include "emorec/features.hpp"

namespace emorec {

enum class WeightSource {
  Computed,           ///< computed from the per-feature accuracy table
  Preset,  ///< the printed weight table (not normalized)
  File,          ///< an explicit matrix or accuracy table from the config
};

std::string_view to_string(WeightSource s);

/// Everything the pipeline leaves open. Defaults reproduce the built-in values.
struct Config {
  classify::Thresholds thresholds{};
  WeightSource weight_source = WeightSource::Computed;
  /// Source File: either an explicit weight grid or an accuracy table to run
  /// through compute_weights. Exactly one is set.
  std::optional<classify::WeightMatrix::Grid> weight_grid;
  std::optional<classify::AccuracyTable> accuracy_table;
  features::FeatureParams params{};

  /// Throws ArgumentError on out-of-range values.
  void validate() const;

  classify::RuleTable rules() const;
  classify::WeightMatrix weights() const;
};

/// Parses a JSON config. Missing keys keep their defaults, unknown keys are
/// rejected. `base_dir` resolves a relative "weights.path".
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file. Unreadable files raise IoError.
Config load_config(const std::filesystem::path& path);

/// Canonical JSON form of `cfg` (every key present).
std::string config_to_json(const Config& cfg);

}  // namespace emorec
