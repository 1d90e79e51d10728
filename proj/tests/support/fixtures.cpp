#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "legend/dataset.hpp"

#include <unistd.h>

namespace legend::testing {

GrayImage random_dyadic_image(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 256);
  std::vector<double> data(static_cast<std::size_t>(width) * height);
  for (double& v : data) v = level(rng) / 256.0;
  return GrayImage(width, height, std::move(data));
}

ScoreMap random_score_map(std::uint64_t seed, std::size_t count, int x_span, int y_span,
                          const Alphabet& alphabet) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> xd(0, x_span - 1);
  std::uniform_int_distribution<int> yd(0, y_span - 1);
  std::uniform_real_distribution<double> sd(-2.0, 2.0);
  std::set<GridPoint> points;
  while (points.size() < count) points.insert({xd(rng), yd(rng)});
  ScoreMap map;
  map.alphabet = alphabet;
  map.stride = 1;
  map.image_height = y_span;
  for (const auto& p : points) {
    map.locations.push_back(p);
    ClassScores s;
    for (std::size_t c = 0; c < alphabet.size(); ++c) s.scores.push_back(sd(rng));
    map.scores.push_back(std::move(s));
  }
  return map;
}

namespace {

SvmModel train_small(SpectrumMode mode) {
  DescriptorConfig config;
  config.spectrum = mode;
  CharacterSetParams params;
  params.per_class = 20;
  params.light_azimuths = {degrees_to_radians(45.0)};
  params.emboss.seed = 11;
  const auto data = build_training_set(Alphabet::legend_default(), params, config);
  TrainParams tp;
  tp.C = 0.5;
  tp.seed = 5;
  tp.descriptor_config = config;
  return train(data, tp);
}

}  // namespace

const SvmModel& small_glyph_model(SpectrumMode mode) {
  static const SvmModel half = train_small(SpectrumMode::Half180);
  if (mode == SpectrumMode::Half180) return half;
  static const SvmModel full = train_small(SpectrumMode::Full360);
  return full;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("legend-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace legend::testing
