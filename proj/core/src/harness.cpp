#include "emorec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "emorec/error.hpp"
#include "emorec/features.hpp"
#include "emorec/image_io.hpp"
#include "emorec/raster.hpp"
#include "emorec/synthcorpus.hpp"

namespace emorec::harness {

namespace {

using json = nlohmann::ordered_json;
using classify::Emotion;
using classify::kEmotionCount;
using classify::kEmotions;

constexpr std::array<std::string_view, 5> kTruthColumns = {"mo", "lc", "w", "ebc", "ebm"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Comma-separated fields; double quotes protect commas, "" is a literal quote.
std::vector<std::string> split_csv(const std::string& line, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!trim(cur).empty()) {
        throw ArgumentError("malformed manifest: stray quote on line " + std::to_string(line_no));
      }
      cur.clear();
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw ArgumentError("malformed manifest: unterminated quote on line " + std::to_string(line_no));
  out.push_back(was_quoted ? cur : trim(cur));
  return out;
}

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

double parse_number(const std::string& s, int line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ArgumentError("malformed manifest: bad number '" + s + "' on line " + std::to_string(line_no));
  }
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json features_json(const FeatureVector& f) {
  return json{{"mo", f.mo}, {"lc", f.lc}, {"w", f.w}, {"ebc", f.ebc}, {"ebm", f.ebm}};
}

json scores_json(const classify::Decision& d) {
  json s = json::object();
  for (Emotion e : kEmotions) s[std::string(to_string(e))] = d.scores[static_cast<int>(e)];
  return s;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ImageRecord evaluate_one(const std::filesystem::path& corpus_dir, const ManifestRow& row,
                         const Config& cfg, const classify::RuleTable& rules,
                         const classify::WeightMatrix& weights, classify::Method method) {
  ImageRecord rec;
  rec.path = row.path;
  rec.label = row.label;
  std::string lower = row.label;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "skip") {
    rec.status = ItemStatus::Skipped;
    return rec;
  }
  rec.truth = classify::parse_emotion(row.label);
  if (!rec.truth) {
    rec.status = ItemStatus::Unclassifiable;
    return rec;
  }
  ColorImage image;
  try {
    image = io::read_image(corpus_dir / row.path);
  } catch (const std::exception& e) {
    rec.status = ItemStatus::Failed;
    rec.failure_stage = "read";
    rec.failure = e.what();
    return rec;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const FeatureVector fv = features::extract_features(image, cfg.params);
    rec.decision = classify::decide(fv, method, rules, weights);
    rec.features = fv;
    rec.status = ItemStatus::Classified;
  } catch (const ExtractionError& e) {
    rec.status = ItemStatus::Failed;
    rec.failure_stage = e.stage();
    rec.failure = e.what();
  } catch (const std::exception& e) {
    rec.status = ItemStatus::Failed;
    rec.failure_stage = "error";
    rec.failure = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

// --- drawing helpers for explain --------------------------------------------

constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kGreen{0, 255, 0};
constexpr Rgb kBlue{0, 96, 255};

ColorImage to_color(const GrayPlane& g) {
  ColorImage out(g.width(), g.height());
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      const std::uint8_t v = g.at(r, c);
      out.at(r, c) = Rgb{v, v, v};
    }
  }
  return out;
}

void put(ColorImage& img, int row, int col, Rgb color) {
  if (row >= 0 && col >= 0 && row < img.height() && col < img.width()) img.at(row, col) = color;
}

void draw_cross(ColorImage& img, const locate::Point& p, Rgb color, int arm = 4) {
  const int r = static_cast<int>(std::lround(p.row));
  const int c = static_cast<int>(std::lround(p.col));
  for (int d = -arm; d <= arm; ++d) {
    put(img, r + d, c, color);
    put(img, r, c + d, color);
  }
}

void draw_rect(ColorImage& img, const Rect& r, Rgb color) {
  for (int x = r.x0; x < r.x1(); ++x) {
    put(img, r.y0, x, color);
    put(img, r.y1() - 1, x, color);
  }
  for (int y = r.y0; y < r.y1(); ++y) {
    put(img, y, r.x0, color);
    put(img, y, r.x1() - 1, color);
  }
}

void draw_line(ColorImage& img, const Rect& box, const features::BrowLine& line, Rgb color) {
  for (std::size_t c = 0; c < line.heights.size(); ++c) {
    if (line.heights[c]) put(img, box.y0 + *line.heights[c], box.x0 + static_cast<int>(c), color);
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

// --- manifests ---------------------------------------------------------------

std::vector<ManifestRow> parse_manifest(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  std::vector<ManifestRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line, line_no);
    if (header.empty()) {
      header = fields;
      for (auto& h : header) {
        std::transform(h.begin(), h.end(), h.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      }
      if (header.size() < 2 || header[0] != "path" || header[1] != "emotion") {
        throw ArgumentError("malformed manifest: header must start with path,emotion");
      }
      if (header.size() != 2) {
        bool ok = header.size() == 2 + kTruthColumns.size();
        for (std::size_t i = 0; ok && i < kTruthColumns.size(); ++i) ok = header[2 + i] == kTruthColumns[i];
        if (!ok) throw ArgumentError("malformed manifest: expected path,emotion[,mo,lc,w,ebc,ebm]");
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ArgumentError("malformed manifest: line " + std::to_string(line_no) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(header.size()));
    }
    if (fields[0].empty()) {
      throw ArgumentError("malformed manifest: empty path on line " + std::to_string(line_no));
    }
    ManifestRow row{fields[0], fields[1], std::nullopt};
    if (fields.size() > 2 && std::any_of(fields.begin() + 2, fields.end(),
                                         [](const std::string& f) { return !f.empty(); })) {
      FeatureVector fv;
      fv.mo = parse_number(fields[2], line_no);
      fv.lc = parse_number(fields[3], line_no);
      fv.w = parse_number(fields[4], line_no);
      fv.ebc = parse_number(fields[5], line_no);
      fv.ebm = parse_number(fields[6], line_no);
      row.truth = fv;
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ArgumentError("malformed manifest: missing header");
  if (rows.empty()) throw ArgumentError("malformed manifest: no rows");
  return rows;
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string format_manifest(const std::vector<ManifestRow>& rows) {
  std::string out = "path,emotion,mo,lc,w,ebc,ebm\n";
  for (const auto& r : rows) {
    out += csv_field(r.path) + ',' + csv_field(r.label);
    if (r.truth) {
      for (double v : {r.truth->mo, r.truth->lc, r.truth->w, r.truth->ebc, r.truth->ebm}) {
        out += ',' + format_number(v);
      }
    } else {
      out += ",,,,,";
    }
    out += '\n';
  }
  return out;
}

// --- single image ------------------------------------------------------------

Classification classify_image(const ColorImage& image, classify::Method method, const Config& cfg,
                              const std::optional<Rect>& face_rect) {
  Classification c;
  c.features = features::extract_features(image, cfg.params, face_rect);
  c.decision = classify::decide(c.features, method, cfg.rules(), cfg.weights());
  return c;
}

std::string classification_json(const Classification& c) {
  json j;
  j["label"] = std::string(to_string(c.decision.label));
  j["method"] = std::string(to_string(c.decision.method));
  j["fallback_used"] = c.decision.fallback_used;
  j["scores"] = scores_json(c.decision);
  j["features"] = features_json(c.features);
  return j.dump();
}

// --- evaluation --------------------------------------------------------------

std::string_view to_string(ItemStatus s) {
  switch (s) {
    case ItemStatus::Classified: return "classified";
    case ItemStatus::Failed: return "failed";
    case ItemStatus::Unclassifiable: return "unclassifiable";
    case ItemStatus::Skipped: return "skipped";
  }
  return "?";
}

EvalReport evaluate(const std::filesystem::path& corpus_dir, const std::vector<ManifestRow>& rows,
                    const Config& cfg, const EvalOptions& options) {
  if (rows.empty()) throw ArgumentError("malformed manifest: no rows");
  if (options.threads < 1) throw ArgumentError("threads must be at least 1");
  const classify::RuleTable rules = cfg.rules();
  const classify::WeightMatrix weights = cfg.weights();

  EvalReport report;
  report.method = options.method;
  report.records.resize(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      report.records[i] = evaluate_one(corpus_dir, rows[i], cfg, rules, weights, options.method);
    }
  };
  const int n_threads = std::min<int>(options.threads, static_cast<int>(rows.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<double> times;
  int trace = 0;
  for (const ImageRecord& rec : report.records) {
    switch (rec.status) {
      case ItemStatus::Skipped: ++report.skipped; continue;
      case ItemStatus::Unclassifiable: ++report.unclassifiable; continue;
      default: break;
    }
    ++report.total;
    EmotionStats& st = report.per_emotion[static_cast<int>(*rec.truth)];
    ++st.total;
    if (rec.status == ItemStatus::Failed) {
      ++st.failed;
      ++report.failed;
      continue;
    }
    times.push_back(rec.seconds);
    ++st.classified;
    const int t = static_cast<int>(*rec.truth);
    const int p = static_cast<int>(rec.decision->label);
    ++report.confusion[t][p];
    if (t == p) {
      ++st.correct;
      ++trace;
    }
  }
  for (EmotionStats& st : report.per_emotion) {
    if (st.total > 0) st.accuracy = 100.0 * st.correct / st.total;
  }
  if (report.total > 0) report.overall_accuracy = 100.0 * trace / report.total;
  if (!times.empty()) {
    report.median_seconds = median(times);
    double sum = 0.0;
    for (double t : times) sum += t;
    report.mean_seconds = sum / static_cast<double>(times.size());
  }
  return report;
}

std::string report_json(const EvalReport& report, bool include_timing) {
  json j;
  j["method"] = std::string(to_string(report.method));
  j["total"] = report.total;
  j["failed"] = report.failed;
  j["unclassifiable"] = report.unclassifiable;
  j["skipped"] = report.skipped;
  j["overall_accuracy"] = optional_number(report.overall_accuracy);
  json per = json::object();
  for (Emotion e : kEmotions) {
    const EmotionStats& st = report.per_emotion[static_cast<int>(e)];
    per[std::string(to_string(e))] = {{"total", st.total},
                                      {"classified", st.classified},
                                      {"failed", st.failed},
                                      {"correct", st.correct},
                                      {"accuracy", optional_number(st.accuracy)}};
  }
  j["per_emotion"] = per;
  json labels = json::array();
  for (Emotion e : kEmotions) labels.push_back(std::string(to_string(e)));
  json matrix = json::array();
  for (const auto& row : report.confusion) matrix.push_back(json(row));
  j["confusion"] = {{"labels", labels}, {"matrix", matrix}};
  json records = json::array();
  for (const ImageRecord& rec : report.records) {
    json r;
    r["path"] = rec.path;
    r["label"] = rec.label;
    r["status"] = std::string(to_string(rec.status));
    if (rec.decision) {
      r["predicted"] = std::string(to_string(rec.decision->label));
      r["method"] = std::string(to_string(rec.decision->method));
      r["fallback_used"] = rec.decision->fallback_used;
      r["correct"] = rec.truth == rec.decision->label;
      r["scores"] = scores_json(*rec.decision);
    }
    if (rec.features) r["features"] = features_json(*rec.features);
    if (rec.status == ItemStatus::Failed) {
      r["failure_stage"] = rec.failure_stage;
      r["failure"] = rec.failure;
    }
    if (include_timing && (rec.status == ItemStatus::Classified || rec.status == ItemStatus::Failed)) {
      r["seconds"] = rec.seconds;
    }
    records.push_back(std::move(r));
  }
  j["records"] = records;
  if (include_timing) {
    j["timing"] = {{"median_seconds", report.median_seconds}, {"mean_seconds", report.mean_seconds}};
  }
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];
  out << "method: " << to_string(report.method) << "\n\n";
  std::snprintf(buf, sizeof buf, "%-10s %6s %6s %6s %8s %9s\n", "emotion", "total", "failed",
                "correct", "", "accuracy");
  out << buf;
  for (Emotion e : kEmotions) {
    const EmotionStats& st = report.per_emotion[static_cast<int>(e)];
    std::string acc = st.accuracy ? (std::snprintf(buf, sizeof buf, "%.1f%%", *st.accuracy), buf) : "-";
    std::snprintf(buf, sizeof buf, "%-10s %6d %6d %6d %8s %9s\n", std::string(to_string(e)).c_str(),
                  st.total, st.failed, st.correct, "", acc.c_str());
    out << buf;
  }
  if (report.overall_accuracy) {
    std::snprintf(buf, sizeof buf, "\noverall: %.1f%% (%d items, %d failed", *report.overall_accuracy,
                  report.total, report.failed);
  } else {
    std::snprintf(buf, sizeof buf, "\noverall: - (%d items, %d failed", report.total, report.failed);
  }
  out << buf;
  if (report.unclassifiable) out << ", " << report.unclassifiable << " unclassifiable";
  if (report.skipped) out << ", " << report.skipped << " skipped";
  out << ")\n\nconfusion (rows = truth, columns = predicted)\n";
  std::snprintf(buf, sizeof buf, "%-10s", "");
  out << buf;
  for (Emotion e : kEmotions) {
    std::snprintf(buf, sizeof buf, " %9s", std::string(to_string(e)).c_str());
    out << buf;
  }
  out << '\n';
  for (Emotion t : kEmotions) {
    std::snprintf(buf, sizeof buf, "%-10s", std::string(to_string(t)).c_str());
    out << buf;
    for (Emotion p : kEmotions) {
      std::snprintf(buf, sizeof buf, " %9d", report.confusion[static_cast<int>(t)][static_cast<int>(p)]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

// --- explain -----------------------------------------------------------------

const std::vector<std::string>& explain_artifacts() {
  static const std::vector<std::string> names = {
      "eye_map.png",     "eyes_overlay.png",      "mouth_map.png",
      "mouth_edges.png", "mouth_rowsum.csv",      "brow_gradient.png",
      "brow_line_overlay.png", "corner_map.png", "wrinkle_canny.png"};
  return names;
}

std::vector<std::filesystem::path> explain(const ColorImage& image,
                                           const std::filesystem::path& out_dir,
                                           const Config& cfg,
                                           const std::optional<Rect>& face_rect) {
  const features::FaceAnalysis a = features::analyze_face(image, cfg.params, face_rect);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const auto& names = explain_artifacts();
  std::vector<std::filesystem::path> paths;
  for (const auto& n : names) paths.push_back(out_dir / n);

  io::write_png(paths[0], raster::to_gray8(a.eye_map));

  ColorImage eyes = a.face;
  for (const Rect& r : {a.regions.left_brow, a.regions.right_brow, a.regions.wrinkle, a.regions.lips}) {
    draw_rect(eyes, r, kBlue);
  }
  draw_cross(eyes, a.eyes.left, kRed);
  draw_cross(eyes, a.eyes.right, kRed);
  io::write_png(paths[1], eyes);

  io::write_png(paths[2], raster::to_gray8(a.mouth_map));
  io::write_png(paths[3], raster::to_gray8(a.mouth.edges));

  std::string csv = "row,sum,smoothed,peak\n";
  for (std::size_t r = 0; r < a.mouth.row_profile.size(); ++r) {
    const bool peak = std::find(a.mouth.peaks.positions.begin(), a.mouth.peaks.positions.end(),
                                static_cast<int>(r)) != a.mouth.peaks.positions.end();
    csv += std::to_string(r) + ',' + format_number(a.mouth.row_profile[r]) + ',' +
           format_number(a.mouth.smoothed[r]) + ',' + (peak ? "1" : "0") + '\n';
  }
  write_text(paths[4], csv);

  io::write_png(paths[5], raster::to_gray8(a.left_brow_gradient));

  ColorImage brows = a.face;
  draw_rect(brows, a.regions.left_brow, kBlue);
  draw_rect(brows, a.regions.right_brow, kBlue);
  draw_line(brows, a.regions.left_brow, a.left_brow.line, kGreen);
  draw_line(brows, a.regions.right_brow, a.right_brow.line, kGreen);
  io::write_png(paths[6], brows);

  ColorImage corners = to_color(raster::to_gray8(a.corners.map));
  draw_cross(corners, a.corners.left, kRed);
  draw_cross(corners, a.corners.right, kRed);
  io::write_png(paths[7], corners);

  io::write_png(paths[8], a.wrinkle_edges);
  return paths;
}

// --- gen ---------------------------------------------------------------------

std::vector<ManifestRow> gen(int count, std::uint64_t seed, const std::filesystem::path& out_dir) {
  const auto suite = synth::generate_suite(count, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<ManifestRow> rows;
  rows.reserve(suite.size());
  for (const auto& item : suite) {
    io::write_png(out_dir / item.name, item.image);
    rows.push_back({item.name, std::string(to_string(item.emotion)), item.truth});
  }
  write_text(out_dir / "manifest.csv", format_manifest(rows));
  return rows;
}

}  // namespace emorec::harness
