#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "legend/classifier.hpp"
#include "legend/dataset.hpp"

using namespace legend;
using legend::testing::error_code_of;

namespace {

LabeledDescriptor item(std::vector<double> v, Label label) {
  return {Descriptor{std::move(v), 0}, label};
}

TrainParams toy_params(const std::string& symbols, double C = 1.0) {
  TrainParams p;
  p.C = C;
  p.alphabet = Alphabet(symbols);
  return p;
}

// Three well separated Gaussian blobs in 4-D, one per class of "ABC".
std::vector<LabeledDescriptor> blobs(int per_class, std::uint64_t seed, bool background = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  const std::vector<std::vector<double>> centers = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  std::vector<LabeledDescriptor> out;
  const int classes = background ? 4 : 3;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> v = centers[static_cast<std::size_t>(c)];
      for (double& x : v) x += noise(rng);
      out.push_back(item(v, c == 3 ? kBackground : c));
    }
  }
  return out;
}

double training_accuracy(const SvmModel& model, const std::vector<LabeledDescriptor>& data) {
  std::size_t hits = 0;
  for (const auto& d : data) hits += classify(model, d.descriptor) == d.label ? 1 : 0;
  return double(hits) / double(data.size());
}

}  // namespace

TEST_CASE("Alphabet") {
  const Alphabet a = Alphabet::legend_default();
  CHECK(a.symbols() == "ABCDEFGHLMNOPRSTVX");
  CHECK(a.size() == 18);
  CHECK_FALSE(a.contains('I'));
  CHECK(a.index_of('X') == 17u);
  CHECK(error_code_of([] { Alphabet("AA"); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { Alphabet(""); }) == ErrorCode::InvalidArgument);
  CHECK(label_name(a, 2) == "C");
  CHECK(label_name(a, kBackground) == "BG");
}

TEST_CASE("1-D separable toy problem") {
  const std::vector<LabeledDescriptor> data = {item({0.0}, 0), item({1.0}, 1)};
  const SvmModel model = train(data, toy_params("AB"));
  REQUIRE(model.classes.size() == 2);
  CHECK(classify(model, data[0].descriptor) == 0);
  CHECK(classify(model, data[1].descriptor) == 1);
  // With the bias regularized, the C = 1 optimum is w = -1, b = 0 for A:
  // x = 0 sits exactly on A's decision boundary and wins the tie.
  CHECK(score(model, data[0].descriptor).scores[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(score(model, data[1].descriptor).scores[1] > 0.0);
  CHECK_FALSE(score(model, data[0].descriptor).background.has_value());
}

TEST_CASE("training points of a separable set score positive for their class") {
  const auto data = blobs(10, 11);
  const SvmModel model = train(data, toy_params("ABC"));
  for (const auto& d : data) CHECK(score(model, d.descriptor).scores[std::size_t(d.label)] > 0.0);
}

TEST_CASE("XOR trains without diverging") {
  const std::vector<LabeledDescriptor> data = {item({0, 0}, 0), item({1, 1}, 0),
                                               item({0, 1}, 1), item({1, 0}, 1)};
  const SvmModel model = train(data, toy_params("AB", 10.0));
  for (const auto& cw : model.classes) {
    CHECK(std::isfinite(cw.bias));
    for (double w : cw.weights) CHECK(std::isfinite(w));
  }
  CHECK(training_accuracy(model, data) <= 1.0);
}

TEST_CASE("zero descriptor scores are the biases") {
  const auto data = blobs(10, 1);
  const SvmModel model = train(data, toy_params("ABC"));
  const ClassScores s = score(model, Descriptor{std::vector<double>(4, 0.0), 0});
  for (std::size_t c = 0; c < 3; ++c) CHECK(s.scores[c] == model.classes[c].bias);
}

TEST_CASE("classify is the argmax of the scores") {
  const auto data = blobs(15, 2, true);
  const SvmModel model = train(data, toy_params("ABC", 0.3));
  REQUIRE(model.has_background);
  REQUIRE(model.classes.size() == 4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int t = 0; t < 500; ++t) {
    const Descriptor d{{u(rng), u(rng), u(rng), u(rng)}, 0};
    const ClassScores s = score(model, d);
    REQUIRE(s.background.has_value());
    Label best = 0;
    double top = s.scores[0];
    for (std::size_t c = 1; c < s.scores.size(); ++c) {
      if (s.scores[c] > top) {
        top = s.scores[c];
        best = static_cast<Label>(c);
      }
    }
    if (*s.background > top) best = kBackground;
    CHECK(classify(model, d) == best);
  }
}

TEST_CASE("ties go to the earlier class") {
  SvmModel model;
  model.alphabet = Alphabet("AB");
  model.has_background = true;
  model.classes = {{0, 0.5, {0.0}}, {1, 0.5, {0.0}}, {kBackground, 0.5, {0.0}}};
  CHECK(classify(model, Descriptor{{1.0}, 0}) == 0);
}

TEST_CASE("a model without background never returns it") {
  const auto data = blobs(10, 3);
  const SvmModel model = train(data, toy_params("ABC"));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    CHECK(classify(model, Descriptor{{u(rng), u(rng), u(rng), u(rng)}, 0}) != kBackground);
  }
}

TEST_CASE("separable data reaches 100% with large C") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = blobs(30, seed);
    CHECK(training_accuracy(train(data, toy_params("ABC", 1e4)), data) == 1.0);
  }
}

TEST_CASE("training is deterministic") {
  const auto data = blobs(20, 5);
  TrainParams p = toy_params("ABC", 0.7);
  p.seed = 42;
  CHECK(train(data, p) == train(data, p));
}

TEST_CASE("background examples only act as negatives") {
  // Relabelling BG as class B leaves the one-vs-rest subproblem of A
  // untouched, so A's weights must agree bit for bit.
  std::vector<LabeledDescriptor> with_bg = {item({0.0, 0.1}, 0), item({0.2, 0.0}, 0),
                                            item({1.0, 0.9}, 1), item({0.9, 1.1}, 1),
                                            item({0.5, -1.0}, kBackground),
                                            item({-0.4, 0.8}, kBackground)};
  std::vector<LabeledDescriptor> relabelled = with_bg;
  for (auto& d : relabelled) {
    if (d.label == kBackground) d.label = 1;
  }
  const SvmModel a = train(with_bg, toy_params("AB"));
  const SvmModel b = train(relabelled, toy_params("AB"));
  CHECK(a.has_background);
  CHECK_FALSE(b.has_background);
  CHECK(a.classes[0] == b.classes[0]);
}

TEST_CASE("training preconditions") {
  CHECK(error_code_of([] {
          train(std::vector<LabeledDescriptor>{item({0.0}, 0)}, toy_params("AB"));
        }) == ErrorCode::EmptyClass);
  CHECK(error_code_of([] {
          train(std::vector<LabeledDescriptor>{item({0.0}, 0), item({1.0, 2.0}, 1)},
                toy_params("AB"));
        }) == ErrorCode::DimensionMismatch);
  for (double C : {0.0, -1.0, std::numeric_limits<double>::infinity()}) {
    CHECK(error_code_of([&] {
            train(std::vector<LabeledDescriptor>{item({0.0}, 0), item({1.0}, 1)},
                  toy_params("AB", C));
          }) == ErrorCode::InvalidC);
  }
}

TEST_CASE("scoring a descriptor of the wrong length") {
  const SvmModel model = train(blobs(5, 6), toy_params("ABC"));
  CHECK(error_code_of([&] { score(model, Descriptor{{1.0, 2.0}, 0}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("model files") {
  legend::testing::TempDir dir;
  const SvmModel& model = legend::testing::small_glyph_model(SpectrumMode::Half180);

  SUBCASE("round trip is bit exact") {
    save_model(model, dir / "m.txt");
    CHECK(load_model(dir / "m.txt") == model);
    const SvmModel toy = train(blobs(8, 7, true), toy_params("ABC", 0.123456789));
    CHECK(parse_model(serialize_model(toy)) == toy);
  }

  SUBCASE("truncation is detected") {
    const std::string text = serialize_model(model);
    for (std::size_t cut : {std::size_t{5}, text.size() / 3, text.size() - 2}) {
      const auto code = error_code_of([&] { parse_model(text.substr(0, cut)); });
      REQUIRE(code.has_value());
      CHECK((*code == ErrorCode::CorruptData || *code == ErrorCode::ChecksumMismatch));
    }
  }

  SUBCASE("a flipped weight digit breaks the checksum") {
    std::string text = serialize_model(model);
    const auto pos = text.rfind('3');
    text[pos] = '4';
    CHECK(error_code_of([&] { parse_model(text); }) == ErrorCode::ChecksumMismatch);
  }

  SUBCASE("unknown format version") {
    std::string text = serialize_model(model);
    const auto eol = text.find('\n');
    text = "legend-svm 99" + text.substr(eol);
    CHECK(error_code_of([&] { parse_model(text); }) == ErrorCode::FormatVersionMismatch);
  }

  SUBCASE("unreadable path") {
    CHECK(error_code_of([&] { load_model(dir / "missing.txt"); }) == ErrorCode::IoError);
    CHECK(error_code_of([&] { save_model(model, dir / "no" / "such" / "dir.txt"); }) ==
          ErrorCode::IoError);
  }

  SUBCASE("Half180 model rejects Full360 descriptors") {
    DescriptorConfig full;
    full.spectrum = SpectrumMode::Full360;
    const Descriptor d = describe_character(render_embossed_glyph('S', EmbossConfig{}), full);
    CHECK(error_code_of([&] { score(model, d); }) == ErrorCode::ConfigMismatch);
  }
}

TEST_CASE("synthetic glyphs classify correctly") {
  const SvmModel& model = legend::testing::small_glyph_model(SpectrumMode::Half180);
  EmbossConfig config;
  config.seed = 999;
  const Descriptor d = describe_character(render_embossed_glyph('S', config),
                                          *model.descriptor_config);
  CHECK(label_name(model.alphabet, classify(model, d)) == "S");
}

TEST_CASE("stratified folds") {
  std::vector<LabeledDescriptor> data;
  for (int c = 0; c < 18; ++c) {
    for (int i = 0; i < 5; ++i) data.push_back(item({double(c), double(i)}, c));
  }
  const auto folds = stratified_folds(data, 5, 3);
  std::vector<std::vector<int>> per(5, std::vector<int>(18, 0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    ++per[static_cast<std::size_t>(folds[i])][static_cast<std::size_t>(data[i].label)];
  }
  for (const auto& fold : per) {
    for (int n : fold) CHECK(n == 1);
  }

  data.pop_back();
  CHECK(error_code_of([&] { stratified_folds(data, 5, 3); }) == ErrorCode::TooFewExamples);
  CHECK(error_code_of([&] { stratified_folds(data, 1, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cross validation") {
  const auto data = blobs(10, 8);
  const std::vector<double> grid = {0.1, 1.0, 10.0};

  SUBCASE("separable toy set") {
    const auto cv = cross_validate(data, grid, 5, toy_params("ABC"));
    const auto best = std::find(grid.begin(), grid.end(), cv.best_C) - grid.begin();
    REQUIRE(best < 3);
    CHECK(cv.mean_accuracies[static_cast<std::size_t>(best)] == 1.0);
    CHECK(cv.fold_accuracies.size() == 3);
    CHECK(cv.fold_accuracies[0].size() == 5);
    // Every C separates the blobs, so the tie goes to the smallest.
    CHECK(cv.best_C == 0.1);
  }

  SUBCASE("threads do not change the result") {
    const auto one = cross_validate(data, grid, 5, toy_params("ABC"), 1);
    const auto three = cross_validate(data, grid, 5, toy_params("ABC"), 3);
    CHECK(one.best_C == three.best_C);
    CHECK(one.fold_accuracies == three.fold_accuracies);
  }

  SUBCASE("grid errors") {
    const std::vector<double> bad = {1.0, 0.0};
    CHECK(error_code_of([&] { cross_validate(data, bad, 5, toy_params("ABC")); }) ==
          ErrorCode::InvalidC);
    const std::vector<double> none;
    CHECK(error_code_of([&] { cross_validate(data, none, 5, toy_params("ABC")); }) ==
          ErrorCode::InvalidArgument);
  }

  CHECK(default_c_grid() ==
        std::vector<double>{1.0 / 32, 1.0 / 8, 0.5, 2.0, 8.0, 32.0, 128.0});
}

TEST_CASE("synthetic CV picks C reproducibly") {
  DescriptorConfig config;
  CharacterSetParams params;
  params.per_class = 5;
  params.emboss.seed = 21;
  const auto data = build_training_set(Alphabet::legend_default(), params, config);
  TrainParams p;
  p.descriptor_config = config;
  p.seed = 13;
  const std::vector<double> grid = {0.125, 2.0};
  const auto a = cross_validate(data, grid, 5, p);
  const auto b = cross_validate(data, grid, 5, p);
  CHECK(a.best_C == b.best_C);
  CHECK(a.fold_accuracies == b.fold_accuracies);
}

TEST_CASE("200 glyphs per class train to at least 95%") {
  // C fixed to the value cross-validation selects on the 50-per-class set;
  // a full CV at this size would dominate the suite's runtime.
  DescriptorConfig config;
  CharacterSetParams params;
  params.per_class = 200;
  params.emboss.seed = 31;
  const auto data = build_training_set(Alphabet::legend_default(), params, config);
  TrainParams p;
  p.C = 0.5;
  p.seed = 1;
  p.descriptor_config = config;
  const SvmModel model = train(data, p);
  const double acc = training_accuracy(model, data);
  MESSAGE("training accuracy " << acc);
  CHECK(acc >= 0.95);
}
