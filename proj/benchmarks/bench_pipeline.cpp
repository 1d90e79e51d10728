#include <benchmark/benchmark.h>

#include "legend/classifier.hpp"
#include "legend/dataset.hpp"
#include "legend/keypoint_grid.hpp"
#include "legend/word_detect.hpp"

namespace {

using namespace legend;

const SvmModel& bench_model() {
  static const SvmModel model = [] {
    DescriptorConfig config;
    CharacterSetParams params;
    params.per_class = 10;
    const auto data = build_training_set(Alphabet::legend_default(), params, config);
    TrainParams tp;
    tp.C = 0.5;
    tp.descriptor_config = config;
    return train(data, tp);
  }();
  return model;
}

const GrayImage& bench_word() {
  static const GrayImage img = render_word("METELLVS", EmbossConfig{}, 0.0).image;
  return img;
}

void BM_ComputeDescriptor(benchmark::State& state) {
  DescriptorConfig config;
  config.spectrum = state.range(0) == 0 ? SpectrumMode::Half180 : SpectrumMode::Full360;
  const GradientField field = prepare_gradients(render_embossed_glyph('M', EmbossConfig{}), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_descriptor(field, {49.5, 49.5}, 75.0, config));
  }
}
BENCHMARK(BM_ComputeDescriptor)->Arg(0)->Arg(1);

void BM_ScoreGrid(benchmark::State& state) {
  const SvmModel& model = bench_model();
  const int stride = static_cast<int>(state.range(0));
  std::size_t locations = 0;
  for (auto _ : state) {
    const ScoreMap map = score_grid(bench_word(), model, *model.descriptor_config, stride);
    locations = map.size();
    benchmark::DoNotOptimize(map.scores.data());
  }
  state.counters["locations"] = static_cast<double>(locations);
}
BENCHMARK(BM_ScoreGrid)->Arg(5)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DetectWord(benchmark::State& state) {
  const SvmModel& model = bench_model();
  const ScoreMap map =
      score_grid(bench_word(), model, *model.descriptor_config, static_cast<int>(state.range(0)));
  const PictorialModel pm = PictorialModel::for_height(bench_word().height());
  for (auto _ : state) benchmark::DoNotOptimize(detect_word(map, "METELLVS", pm));
  state.counters["locations"] = static_cast<double>(map.size());
}
BENCHMARK(BM_DetectWord)->Arg(5)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_RecognizeLexicon(benchmark::State& state) {
  const SvmModel& model = bench_model();
  const ScoreMap map = score_grid(bench_word(), model, *model.descriptor_config, 5);
  const Lexicon lexicon = Lexicon::legend_default();
  const PictorialModel pm = PictorialModel::for_height(bench_word().height());
  for (auto _ : state) benchmark::DoNotOptimize(recognize(map, lexicon, pm));
}
BENCHMARK(BM_RecognizeLexicon)->Unit(benchmark::kMillisecond);

void BM_TrainSvm(benchmark::State& state) {
  DescriptorConfig config;
  CharacterSetParams params;
  params.per_class = static_cast<int>(state.range(0));
  const auto data = build_training_set(Alphabet::legend_default(), params, config);
  TrainParams tp;
  tp.C = 0.5;
  tp.descriptor_config = config;
  for (auto _ : state) benchmark::DoNotOptimize(train(data, tp));
}
BENCHMARK(BM_TrainSvm)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
