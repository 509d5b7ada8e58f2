#include <benchmark/benchmark.h>

#include <random>

#include "emorec/classify.hpp"
#include "emorec/edges.hpp"
#include "emorec/features.hpp"
#include "emorec/morphology.hpp"
#include "emorec/raster.hpp"
#include "emorec/synthcorpus.hpp"

using namespace emorec;

namespace {

const ColorImage& face() {
  static const ColorImage img =
      synth::generate_face(synth::random_spec(classify::Emotion::Happy, 1)).image;
  return img;
}

GrayPlane noise(int w, int h) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> d(0, 255);
  GrayPlane p(w, h);
  for (auto& v : p.samples()) v = static_cast<std::uint8_t>(d(rng));
  return p;
}

void BM_Pipeline(benchmark::State& state) {
  const classify::RuleTable rules;
  for (auto _ : state) {
    const FeatureVector fv = features::extract_features(face());
    benchmark::DoNotOptimize(classify::decide(fv, classify::Method::WMV, rules, classify::default_weights()));
  }
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

void BM_Dilate(benchmark::State& state) {
  const GrayPlane p = noise(281, 381);
  const auto se = morph::disk_se(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(morph::dilate(p, se));
}
BENCHMARK(BM_Dilate)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_Gradient(benchmark::State& state) {
  const GrayPlane p = noise(281, 381);
  const auto se = morph::disk_se(2);
  for (auto _ : state) benchmark::DoNotOptimize(morph::gradient(p, se));
}
BENCHMARK(BM_Gradient)->Unit(benchmark::kMicrosecond);

void BM_Canny(benchmark::State& state) {
  const GrayPlane p = raster::to_gray(face());
  for (auto _ : state) benchmark::DoNotOptimize(edges::canny(p, edges::CannyParams{}));
}
BENCHMARK(BM_Canny)->Unit(benchmark::kMicrosecond);

void BM_EyeMap(benchmark::State& state) {
  const ChromaImage c = raster::to_ycbcr(face());
  for (auto _ : state) benchmark::DoNotOptimize(locate::eye_map(c));
}
BENCHMARK(BM_EyeMap)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
