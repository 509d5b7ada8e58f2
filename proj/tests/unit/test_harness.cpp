#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "emorec/harness.hpp"
#include "emorec/image_io.hpp"
#include "emorec/synthcorpus.hpp"

using namespace emorec;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
  const char* env = std::getenv("EMOREC_TEST_TMP");
  const fs::path d = (env ? fs::path(env) : fs::temp_directory_path() / "emorec_unit") / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// A small generated suite shared by the evaluation tests.
const fs::path& suite_dir() {
  static const fs::path dir = [] {
    const fs::path d = tmp("suite");
    harness::gen(2, 5, d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST(Manifest, ParseBasic) {
  const auto rows = harness::parse_manifest("path,emotion\r\na.png,Happy\n\n\"b,c.png\",skip\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].path, "a.png");
  EXPECT_EQ(rows[0].label, "Happy");
  EXPECT_EQ(rows[1].path, "b,c.png");
  EXPECT_FALSE(rows[0].truth.has_value());
}

TEST(Manifest, RoundTripWithTruth) {
  FeatureVector fv{40, 81.5, 0, 0.1 + 0.2, 2.0 / 3.0};
  const std::vector<harness::ManifestRow> rows = {{"x.png", "Happy", fv}, {"y.png", "Fear", std::nullopt}};
  const auto back = harness::parse_manifest(harness::format_manifest(rows));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].truth, fv);
  EXPECT_FALSE(back[1].truth.has_value());
  EXPECT_EQ(back[1].label, "Fear");
}

TEST(Manifest, Malformed) {
  EXPECT_THROW(harness::parse_manifest(""), ArgumentError);
  EXPECT_THROW(harness::parse_manifest("path,emotion\n"), ArgumentError);
  EXPECT_THROW(harness::parse_manifest("file,label\na,Happy\n"), ArgumentError);
  EXPECT_THROW(harness::parse_manifest("path,emotion\na,Happy,extra\n"), ArgumentError);
  EXPECT_THROW(harness::parse_manifest("path,emotion,mo,lc,w,ebc,ebm\na,Happy,1,2,x,4,5\n"), ArgumentError);
  EXPECT_THROW(harness::parse_manifest("path,emotion\n\"a,Happy\n"), ArgumentError);
  EXPECT_THROW(harness::read_manifest("/nonexistent/manifest.csv"), IoError);
}

TEST(Gen, WritesSuiteAndManifest) {
  const fs::path d = suite_dir();
  const auto rows = harness::read_manifest(d / "manifest.csv");
  ASSERT_EQ(rows.size(), 10u);
  const auto suite = synth::generate_suite(2, 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].path, suite[i].name);
    EXPECT_EQ(rows[i].truth, suite[i].truth);
    EXPECT_EQ(io::read_image(d / rows[i].path), suite[i].image);
  }
}

TEST(Gen, RepeatableBytes) {
  const fs::path a = tmp("gen_a");
  const fs::path b = tmp("gen_b");
  harness::gen(1, 9, a);
  harness::gen(1, 9, b);
  for (const auto& entry : fs::directory_iterator(a)) {
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(b / entry.path().filename(), std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(sa, sb) << entry.path().filename();
  }
}

TEST(Evaluate, ReportInvariants) {
  const auto rows = harness::read_manifest(suite_dir() / "manifest.csv");
  const auto report = harness::evaluate(suite_dir(), rows, Config{}, {classify::Method::WMV, 2});
  EXPECT_EQ(report.total, 10);
  int trace = 0;
  for (int t = 0; t < 5; ++t) {
    int row_sum = 0;
    for (int p = 0; p < 5; ++p) row_sum += report.confusion[t][p];
    EXPECT_EQ(row_sum, report.per_emotion[t].classified);
    trace += report.confusion[t][t];
  }
  ASSERT_TRUE(report.overall_accuracy.has_value());
  EXPECT_NEAR(*report.overall_accuracy, 100.0 * trace / report.total, 1e-12);
  ASSERT_EQ(report.records.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(report.records[i].path, rows[i].path);
}

TEST(Evaluate, PartialFailuresAndLabels) {
  auto rows = harness::read_manifest(suite_dir() / "manifest.csv");
  rows.push_back({"missing.png", "Happy", std::nullopt});
  rows.push_back({rows[0].path, "Fear", std::nullopt});
  rows.push_back({rows[1].path, "skip", std::nullopt});
  const auto report = harness::evaluate(suite_dir(), rows, Config{});
  EXPECT_EQ(report.total, 11);
  EXPECT_EQ(report.failed, 1);
  EXPECT_EQ(report.unclassifiable, 1);
  EXPECT_EQ(report.skipped, 1);
  EXPECT_EQ(report.per_emotion[static_cast<int>(classify::Emotion::Happy)].failed, 1);
  const auto& failed = report.records[10];
  EXPECT_EQ(failed.status, harness::ItemStatus::Failed);
  EXPECT_EQ(failed.failure_stage, "read");
  // a failure never counts as correct
  EXPECT_LE(*report.overall_accuracy, 100.0 * 10 / 11 + 1e-9);
  EXPECT_THROW(harness::evaluate(suite_dir(), {}, Config{}), ArgumentError);
}

TEST(Evaluate, OrderIndependentAggregates) {
  auto rows = harness::read_manifest(suite_dir() / "manifest.csv");
  const auto a = harness::evaluate(suite_dir(), rows, Config{});
  std::shuffle(rows.begin(), rows.end(), std::mt19937(4));
  const auto b = harness::evaluate(suite_dir(), rows, Config{}, {classify::Method::WMV, 3});
  EXPECT_EQ(a.confusion, b.confusion);
  EXPECT_EQ(a.overall_accuracy, b.overall_accuracy);
  for (int e = 0; e < 5; ++e) EXPECT_EQ(a.per_emotion[e].accuracy, b.per_emotion[e].accuracy);
}

TEST(Evaluate, JsonWithoutTimingIsStable) {
  const auto rows = harness::read_manifest(suite_dir() / "manifest.csv");
  const auto a = harness::report_json(harness::evaluate(suite_dir(), rows, Config{}), false);
  const auto b = harness::report_json(harness::evaluate(suite_dir(), rows, Config{}, {classify::Method::WMV, 4}), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("seconds"), std::string::npos);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["method"], "wmv");
  EXPECT_EQ(j["confusion"]["matrix"].size(), 5u);
  EXPECT_EQ(j["records"].size(), 10u);
  const auto timed = harness::report_json(harness::evaluate(suite_dir(), rows, Config{}), true);
  EXPECT_NE(timed.find("median_seconds"), std::string::npos);
  EXPECT_NE(harness::report_table(harness::evaluate(suite_dir(), rows, Config{})).find("overall"),
            std::string::npos);
}

TEST(Classify, JsonOutput) {
  const auto face = synth::generate_face(synth::random_spec(classify::Emotion::Happy, 3));
  const auto c = harness::classify_image(face.image, classify::Method::WMV, Config{});
  const auto j = nlohmann::json::parse(harness::classification_json(c));
  EXPECT_EQ(j["label"], "Happy");
  EXPECT_EQ(j["method"], "wmv");
  EXPECT_EQ(j["fallback_used"], false);
  EXPECT_TRUE(j["features"].contains("ebm"));
  const auto rules = harness::classify_image(face.image, classify::Method::Rules, Config{});
  EXPECT_EQ(rules.decision.label, c.decision.label);
}

TEST(Explain, NineArtifactsAndRepeatable) {
  const auto face = synth::generate_face(synth::random_spec(classify::Emotion::Neutral, 4));
  const fs::path a = tmp("explain_a");
  const auto paths = harness::explain(face.image, a, Config{});
  EXPECT_EQ(paths.size(), 9u);
  EXPECT_EQ(std::distance(fs::directory_iterator(a), fs::directory_iterator{}), 9);
  for (const auto& p : paths) EXPECT_TRUE(fs::exists(p)) << p;

  // closed mouth: one accepted peak in the row-sum CSV
  std::ifstream csv(a / "mouth_rowsum.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "row,sum,smoothed,peak");
  int peaks = 0;
  while (std::getline(csv, line)) peaks += line.back() == '1';
  EXPECT_EQ(peaks, 1);

  const fs::path b = tmp("explain_b");
  harness::explain(face.image, b, Config{});
  for (const auto& name : harness::explain_artifacts()) {
    std::ifstream fa(a / name, std::ios::binary);
    std::ifstream fb(b / name, std::ios::binary);
    EXPECT_EQ(std::string((std::istreambuf_iterator<char>(fa)), {}),
              std::string((std::istreambuf_iterator<char>(fb)), {}))
        << name;
  }
}
