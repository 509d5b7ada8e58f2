// emorec command-line tool: classify, explain, evaluate, gen, config.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "emorec/config.hpp"
#include "emorec/error.hpp"
#include "emorec/harness.hpp"
#include "emorec/image_io.hpp"

namespace {

using namespace emorec;

Config load(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

std::optional<Rect> parse_rect(const std::string& s) {
  if (s.empty()) return std::nullopt;
  Rect r{};
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(s);
  in >> r.x0 >> c1 >> r.y0 >> c2 >> r.w >> c3 >> r.h;
  if (!in || c1 != ',' || c2 != ',' || c3 != ',' || !in.eof()) {
    throw ArgumentError("--face-rect expects x,y,w,h");
  }
  return r;
}

classify::Method method_of(const std::string& s) {
  auto m = classify::parse_method(s);
  if (!m) throw ArgumentError("--method must be rules, mv or wmv");
  return *m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based facial emotion recognition"};
  app.require_subcommand(1);

  std::string config_path;
  std::string method = "wmv";

  auto* classify_cmd = app.add_subcommand("classify", "Classify one face image; prints JSON");
  std::string image_path;
  std::string face_rect;
  classify_cmd->add_option("image", image_path, "Image file (PNG or PPM)")->required();
  classify_cmd->add_option("--method", method, "rules, mv or wmv")->capture_default_str();
  classify_cmd->add_option("--face-rect", face_rect, "Face rectangle x,y,w,h");
  classify_cmd->add_option("--config", config_path, "JSON config");

  auto* explain_cmd = app.add_subcommand("explain", "Write intermediate planes for one image");
  std::string out_dir;
  explain_cmd->add_option("image", image_path, "Image file")->required();
  explain_cmd->add_option("out_dir", out_dir, "Output directory")->required();
  explain_cmd->add_option("--face-rect", face_rect, "Face rectangle x,y,w,h");
  explain_cmd->add_option("--config", config_path, "JSON config");

  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a labeled corpus");
  std::string corpus_dir;
  std::string manifest_path;
  std::string report_path;
  int threads = 1;
  bool omit_timing = false;
  eval_cmd->add_option("corpus_dir", corpus_dir, "Directory the manifest paths are relative to")
      ->required();
  eval_cmd->add_option("manifest", manifest_path, "Manifest CSV (default: corpus_dir/manifest.csv)");
  eval_cmd->add_option("--method", method, "rules, mv or wmv")->capture_default_str();
  eval_cmd->add_option("--config", config_path, "JSON config");
  eval_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--report", report_path, "Write the JSON report here");
  eval_cmd->add_flag("--omit-timing", omit_timing, "Leave timing fields out of the JSON report");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic labeled suite");
  int count = 10;
  std::uint64_t seed = 1;
  std::string gen_out = "synthetic";
  gen_cmd->add_option("count", count, "Faces per emotion")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  auto* config_cmd = app.add_subcommand("config", "Print the effective config, rules and weights");
  config_cmd->add_option("--config", config_path, "JSON config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) {
      const Config cfg = load(config_path);
      const ColorImage img = io::read_image(image_path);
      const auto c = harness::classify_image(img, method_of(method), cfg, parse_rect(face_rect));
      std::cout << harness::classification_json(c) << '\n';
    } else if (*explain_cmd) {
      const Config cfg = load(config_path);
      const ColorImage img = io::read_image(image_path);
      for (const auto& p : harness::explain(img, out_dir, cfg, parse_rect(face_rect))) {
        std::cout << p.string() << '\n';
      }
    } else if (*eval_cmd) {
      const Config cfg = load(config_path);
      const std::filesystem::path manifest =
          manifest_path.empty() ? std::filesystem::path(corpus_dir) / "manifest.csv"
                                : std::filesystem::path(manifest_path);
      const auto rows = harness::read_manifest(manifest);
      const auto report = harness::evaluate(corpus_dir, rows, cfg, {method_of(method), threads});
      const std::string json = harness::report_json(report, !omit_timing);
      if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!(out << json)) throw IoError("cannot write " + report_path);
      }
      std::cout << harness::report_table(report);
      if (!omit_timing) {
        std::printf("\nmedian %.4f s, mean %.4f s per image\n", report.median_seconds,
                    report.mean_seconds);
      }
    } else if (*gen_cmd) {
      const auto rows = harness::gen(count, seed, gen_out);
      std::cout << "wrote " << rows.size() << " faces and manifest.csv to " << gen_out << '\n';
    } else if (*config_cmd) {
      const Config cfg = load(config_path);
      std::cout << config_to_json(cfg) << "\n\n"
                << cfg.rules().describe() << '\n'
                << cfg.weights().describe() << '\n';
    }
  } catch (const ExtractionError& e) {
    std::cerr << "extraction failed at stage " << e.stage() << ": " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
