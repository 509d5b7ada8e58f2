#include "emorec/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emorec/error.hpp"

namespace emorec {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  if (!obj.is_object()) throw ArgumentError("config: " + where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (std::string_view k : known) found = found || k == key;
    if (!found) throw ArgumentError("config: unknown key " + where + "." + key);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) throw ArgumentError("config: " + where + "." + key + " must be an integer");
  } else {
    if (!v.is_number()) throw ArgumentError("config: " + where + "." + key + " must be a number");
  }
  out = v.get<T>();
}

std::array<std::array<double, 5>, 5> read_grid(const json& v, const std::string& what) {
  std::array<std::array<double, 5>, 5> g{};
  if (!v.is_array() || v.size() != 5) throw ArgumentError("config: " + what + " needs 5 rows");
  for (std::size_t e = 0; e < 5; ++e) {
    if (!v[e].is_array() || v[e].size() != 5) {
      throw ArgumentError("config: " + what + " rows need 5 columns");
    }
    for (std::size_t f = 0; f < 5; ++f) {
      if (!v[e][f].is_number()) throw ArgumentError("config: " + what + " entries must be numbers");
      g[e][f] = v[e][f].get<double>();
    }
  }
  return g;
}

void read_weights(const json& w, Config& cfg, const std::filesystem::path& base_dir) {
  reject_unknown(w, {"source", "matrix", "accuracy", "path"}, "weights");
  const std::string source = w.value("source", std::string("computed"));
  if (source == "computed") {
    cfg.weight_source = WeightSource::Computed;
  } else if (source == "preset") {
    cfg.weight_source = WeightSource::Preset;
  } else if (source == "file") {
    cfg.weight_source = WeightSource::File;
  } else {
    throw ArgumentError("config: weights.source must be computed, preset or file");
  }
  if (cfg.weight_source != WeightSource::File) {
    if (w.contains("matrix") || w.contains("accuracy") || w.contains("path")) {
      throw ArgumentError("config: weights.matrix/accuracy/path need source \"file\"");
    }
    return;
  }
  json body = w;
  if (w.contains("path")) {
    if (w.contains("matrix") || w.contains("accuracy")) {
      throw ArgumentError("config: weights.path excludes inline matrix/accuracy");
    }
    std::filesystem::path p = w.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) throw IoError("cannot read weights file " + p.string());
    try {
      body = json::parse(in);
    } catch (const json::exception& e) {
      throw IoError("malformed weights file " + p.string() + ": " + e.what());
    }
    reject_unknown(body, {"matrix", "accuracy"}, "weights file");
  }
  const bool has_matrix = body.contains("matrix");
  const bool has_accuracy = body.contains("accuracy");
  if (has_matrix == has_accuracy) {
    throw ArgumentError("config: weights source \"file\" needs exactly one of matrix, accuracy");
  }
  if (has_matrix) cfg.weight_grid = read_grid(body.at("matrix"), "weights.matrix");
  if (has_accuracy) cfg.accuracy_table = read_grid(body.at("accuracy"), "weights.accuracy");
}

std::string_view mode_name(edges::ThresholdMode m) {
  return m == edges::ThresholdMode::Absolute ? "absolute" : "fraction_of_max";
}

json grid_json(const std::array<std::array<double, 5>, 5>& g) {
  json rows = json::array();
  for (const auto& r : g) rows.push_back(json(r));
  return rows;
}

}  // namespace

std::string_view to_string(WeightSource s) {
  switch (s) {
    case WeightSource::Computed: return "computed";
    case WeightSource::Preset: return "preset";
    case WeightSource::File: return "file";
  }
  return "?";
}

void Config::validate() const {
  classify::RuleTable check(thresholds);
  (void)check;
  params.validate();
  if (weight_source == WeightSource::File) {
    if (weight_grid.has_value() == accuracy_table.has_value()) {
      throw ArgumentError("config: weight source file needs exactly one of matrix, accuracy");
    }
    (void)weights();
  } else if (weight_grid || accuracy_table) {
    throw ArgumentError("config: explicit weights need weight source file");
  }
}

classify::RuleTable Config::rules() const { return classify::RuleTable(thresholds); }

classify::WeightMatrix Config::weights() const {
  switch (weight_source) {
    case WeightSource::Computed: return classify::default_weights();
    case WeightSource::Preset: return classify::printed_weights_preset();
    case WeightSource::File:
      if (weight_grid) return classify::WeightMatrix::from_grid(*weight_grid);
      if (accuracy_table) return classify::compute_weights(*accuracy_table);
      break;
  }
  throw ArgumentError("config: weight source file without matrix or accuracy");
}

namespace {
void fill(const json& root, Config& cfg, const std::filesystem::path& base_dir);
}  // namespace

Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what());
  }
  Config cfg;
  try {
    fill(root, cfg, base_dir);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

void fill(const json& root, Config& cfg, const std::filesystem::path& base_dir) {
  reject_unknown(root, {"thresholds", "weights", "morphology", "brow", "signal", "canny", "locate"},
                 "root");
  auto& p = cfg.params;
  if (root.contains("thresholds")) {
    const json& t = root.at("thresholds");
    reject_unknown(t, {"mo", "lc", "w", "ebc", "ebm"}, "thresholds");
    read(t, "mo", cfg.thresholds.mo, "thresholds");
    read(t, "lc", cfg.thresholds.lc, "thresholds");
    read(t, "w", cfg.thresholds.w, "thresholds");
    read(t, "ebc", cfg.thresholds.ebc, "thresholds");
    read(t, "ebm", cfg.thresholds.ebm, "thresholds");
  }
  if (root.contains("weights")) read_weights(root.at("weights"), cfg, base_dir);
  if (root.contains("morphology")) {
    const json& m = root.at("morphology");
    reject_unknown(m, {"lip_dilation_radius", "mouth_opening_radius", "brow_gradient_radius",
                       "brow_opening_width"},
                   "morphology");
    read(m, "lip_dilation_radius", p.lip_dilation_radius, "morphology");
    read(m, "mouth_opening_radius", p.mouth_opening_radius, "morphology");
    read(m, "brow_gradient_radius", p.brow_gradient_radius, "morphology");
    read(m, "brow_opening_width", p.brow_opening_width, "morphology");
  }
  if (root.contains("brow")) {
    const json& b = root.at("brow");
    reject_unknown(b, {"binarize_threshold", "mgii_sigma_factor"}, "brow");
    read(b, "binarize_threshold", p.brow_binarize_threshold, "brow");
    read(b, "mgii_sigma_factor", p.mgii_sigma_factor, "brow");
  }
  if (root.contains("signal")) {
    const json& s = root.at("signal");
    reject_unknown(s, {"smoothing_window", "smoothing_passes", "peak_fraction", "peak_separation"},
                   "signal");
    read(s, "smoothing_window", p.smoothing_window, "signal");
    read(s, "smoothing_passes", p.smoothing_passes, "signal");
    read(s, "peak_fraction", p.peak_fraction, "signal");
    read(s, "peak_separation", p.peak_separation, "signal");
  }
  if (root.contains("canny")) {
    const json& c = root.at("canny");
    reject_unknown(c, {"low", "high", "sigma", "mode"}, "canny");
    read(c, "low", p.canny.low_threshold, "canny");
    read(c, "high", p.canny.high_threshold, "canny");
    read(c, "sigma", p.canny.gaussian_sigma, "canny");
    if (c.contains("mode")) {
      const std::string mode = c.at("mode").get<std::string>();
      if (mode == "absolute") {
        p.canny.mode = edges::ThresholdMode::Absolute;
      } else if (mode == "fraction_of_max") {
        p.canny.mode = edges::ThresholdMode::FractionOfMax;
      } else {
        throw ArgumentError("config: canny.mode must be absolute or fraction_of_max");
      }
    }
  }
  if (root.contains("locate")) {
    const json& l = root.at("locate");
    reject_unknown(l, {"band_top", "band_bottom", "threshold_fraction", "brow_width", "brow_top",
                       "brow_bottom", "wrinkle_top", "wrinkle_bottom"},
                   "locate");
    read(l, "band_top", p.locate.band_top, "locate");
    read(l, "band_bottom", p.locate.band_bottom, "locate");
    read(l, "threshold_fraction", p.locate.threshold_fraction, "locate");
    read(l, "brow_width", p.locate.brow_width, "locate");
    read(l, "brow_top", p.locate.brow_top, "locate");
    read(l, "brow_bottom", p.locate.brow_bottom, "locate");
    read(l, "wrinkle_top", p.locate.wrinkle_top, "locate");
    read(l, "wrinkle_bottom", p.locate.wrinkle_bottom, "locate");
  }
}

}  // namespace

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const Config& cfg) {
  const auto& p = cfg.params;
  json root;
  root["thresholds"] = {{"mo", cfg.thresholds.mo},   {"lc", cfg.thresholds.lc},
                        {"w", cfg.thresholds.w},     {"ebc", cfg.thresholds.ebc},
                        {"ebm", cfg.thresholds.ebm}};
  json w;
  w["source"] = std::string(to_string(cfg.weight_source));
  if (cfg.weight_grid) w["matrix"] = grid_json(*cfg.weight_grid);
  if (cfg.accuracy_table) w["accuracy"] = grid_json(*cfg.accuracy_table);
  root["weights"] = w;
  root["morphology"] = {{"lip_dilation_radius", p.lip_dilation_radius},
                        {"mouth_opening_radius", p.mouth_opening_radius},
                        {"brow_gradient_radius", p.brow_gradient_radius},
                        {"brow_opening_width", p.brow_opening_width}};
  root["brow"] = {{"binarize_threshold", p.brow_binarize_threshold},
                  {"mgii_sigma_factor", p.mgii_sigma_factor}};
  root["signal"] = {{"smoothing_window", p.smoothing_window},
                    {"smoothing_passes", p.smoothing_passes},
                    {"peak_fraction", p.peak_fraction},
                    {"peak_separation", p.peak_separation}};
  root["canny"] = {{"low", p.canny.low_threshold},
                   {"high", p.canny.high_threshold},
                   {"sigma", p.canny.gaussian_sigma},
                   {"mode", std::string(mode_name(p.canny.mode))}};
  root["locate"] = {{"band_top", p.locate.band_top},
                    {"band_bottom", p.locate.band_bottom},
                    {"threshold_fraction", p.locate.threshold_fraction},
                    {"brow_width", p.locate.brow_width},
                    {"brow_top", p.locate.brow_top},
                    {"brow_bottom", p.locate.brow_bottom},
                    {"wrinkle_top", p.locate.wrinkle_top},
                    {"wrinkle_bottom", p.locate.wrinkle_bottom}};
  return root.dump(2);
}

}  // namespace emorec
