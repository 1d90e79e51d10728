#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <random>

#include "legend/classifier.hpp"
#include "legend/cli.hpp"
#include "legend/dataset.hpp"
#include "legend/error.hpp"
#include "legend/evaluation.hpp"
#include "legend/keypoint_grid.hpp"
#include "legend/word_detect.hpp"

namespace legend::cli {

namespace fs = std::filesystem;

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    const auto comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in " + what);
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::vector<double> azimuths_in_radians(const std::string& degrees, const std::string& what) {
  std::vector<double> out;
  for (double d : parse_number_list(degrees, what)) out.push_back(degrees_to_radians(d));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, what + " needs at least one value");
  return out;
}

std::string zero_padded(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03zu", index);
  return buf;
}

// Writes one character split below <root>/<split>/<label>/<index>.pgm.
DatasetManifest write_character_split(const fs::path& root, const std::string& split,
                                      const Alphabet& alphabet, const CharacterSetParams& params,
                                      const Streams& io) {
  const auto samples = render_character_set(alphabet, params);
  DatasetManifest manifest;
  std::vector<std::size_t> counters(alphabet.size() + 1, 0);
  for (const auto& sample : samples) {
    const std::string label = label_name(alphabet, sample.label);
    const std::size_t slot =
        sample.label == kBackground ? alphabet.size() : static_cast<std::size_t>(sample.label);
    const fs::path dir = root / split / label;
    fs::create_directories(dir);
    const fs::path file = dir / (zero_padded(counters[slot]++) + ".pgm");
    save_pgm(sample.image, file);
    manifest.entries.push_back({file, label});
  }
  write_manifest(manifest, root / split / "manifest.csv");
  if (io.verbose) io.log() << split << ": " << samples.size() << " images\n";
  return manifest;
}

DescriptorConfig descriptor_from(const DescriptorOptions& options) {
  DescriptorConfig config;
  config.spectrum = parse_spectrum(options.spectrum);
  config.grid_cells = options.grid_cells;
  config.bins_per_cell = options.bins;
  config.scale_fraction = options.scale_fraction;
  config.validate();
  return config;
}

std::vector<LabeledDescriptor> describe_manifest(const DatasetManifest& manifest,
                                                 const Alphabet& alphabet,
                                                 const DescriptorConfig& config, double smoothing,
                                                 bool keep_background) {
  std::vector<LabeledDescriptor> out;
  for (const auto& entry : manifest.entries) {
    const Label label = parse_character_label(entry.label, alphabet);
    if (label == kBackground && !keep_background) continue;
    out.push_back({describe_character(load_image(entry.path), config, smoothing), label});
  }
  return out;
}

const DescriptorConfig& model_descriptor(const SvmModel& model) {
  if (!model.descriptor_config) {
    throw Error(ErrorCode::ConfigMismatch, "model carries no descriptor configuration");
  }
  return *model.descriptor_config;
}

Lexicon lexicon_from(const fs::path& path, const Alphabet& alphabet) {
  return path.empty() ? Lexicon::legend_default() : Lexicon::load(path, alphabet);
}

struct ScoredWord {
  std::string truth;
  std::string source;
  ScoreMap map;
};

ScoreMap score_word_image(const fs::path& path, const SvmModel& model, const WordOptions& options,
                          int threads) {
  const DescriptorConfig& config = model_descriptor(model);
  const GrayImage img = normalize_word_height(load_image(path), options.reference_height);
  const int stride = options.stride.value_or(default_stride(img.height()));
  GridOptions grid;
  grid.smoothing_sigma = options.smoothing;
  grid.threads = threads;
  return score_grid(img, model, config, stride, grid);
}

PictorialModel pictorial_for(const ScoreMap& map, const SvmModel& model, double lambda,
                             std::optional<double> theta) {
  PictorialModel pm = PictorialModel::for_height(map.image_height, model_descriptor(model));
  pm.lambda = lambda;
  if (theta) pm.theta = *theta;
  pm.validate();
  return pm;
}

void print_ranking(const std::string& source, const std::vector<RankedWord>& ranking, int top_k,
                   std::ostream& out) {
  out << source << '\n';
  const std::size_t shown = std::min<std::size_t>(ranking.size(), static_cast<std::size_t>(top_k));
  for (std::size_t r = 0; r < shown; ++r) {
    const auto& cfg = ranking[r].configuration;
    out << "  " << r + 1 << ". " << ranking[r].word() << "  "
        << (cfg.feasible() ? fmt("%.6f", cfg.normalized_cost) : std::string("infeasible")) << "  "
        << format_placements(cfg.placements) << '\n';
  }
}

}  // namespace

int cmd_synth(const SynthOptions& options, const GlobalOptions& global, const Streams& io) {
  if (options.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  if (options.word_copies < 0) throw Error(ErrorCode::InvalidArgument, "--word-copies must be >= 0");
  const Alphabet alphabet = Alphabet::legend_default();
  const auto train_azimuths = azimuths_in_radians(options.train_azimuths, "--train-azimuth");
  const auto test_azimuths = azimuths_in_radians(options.test_azimuths, "--test-azimuth");
  const Lexicon lexicon = lexicon_from(options.lexicon, alphabet);

  std::mt19937_64 rng(global.seed);
  CharacterSetParams train;
  train.per_class = options.per_class;
  train.light_azimuths = train_azimuths;
  train.background = options.background;
  train.emboss.image_size = options.image_size;
  train.emboss.seed = rng();
  CharacterSetParams test = train;
  test.per_class = options.test_per_class;
  test.light_azimuths = test_azimuths;
  test.emboss.seed = rng();
  train.emboss.validate();

  fs::create_directories(options.out_dir);
  const DatasetManifest train_manifest =
      write_character_split(options.out_dir, "train", alphabet, train, io);
  const DatasetManifest test_manifest =
      write_character_split(options.out_dir, "test", alphabet, test, io);
  DatasetManifest all = train_manifest;
  all.entries.insert(all.entries.end(), test_manifest.entries.begin(), test_manifest.entries.end());
  write_manifest(all, options.out_dir / "manifest.csv");

  // Word copies alternate between the training and the opposed test light.
  DatasetManifest words;
  words.kind = ManifestKind::Words;
  const std::uint64_t word_seed = rng();
  std::size_t word_index = 0;
  for (const auto& word : lexicon.words()) {
    for (int k = 0; k < options.word_copies; ++k) {
      EmbossConfig cfg = train.emboss;
      cfg.seed = word_seed + word_index++;
      cfg.light_azimuth = k % 2 == 0 ? train_azimuths.front() : test_azimuths.front();
      const RenderedWord rendered = render_word(word, cfg, options.curvature, alphabet);
      const fs::path dir = options.out_dir / "words" / word;
      fs::create_directories(dir);
      const fs::path file = dir / (zero_padded(static_cast<std::size_t>(k)) + ".pgm");
      save_pgm(rendered.image, file);
      words.entries.push_back({file, word});
    }
  }
  if (!words.entries.empty()) write_manifest(words, options.out_dir / "words" / "manifest.csv");

  const std::size_t classes = alphabet.size() + (options.background ? 1 : 0);
  io.out << "synth: " << train_manifest.entries.size() << " train + "
         << test_manifest.entries.size() << " test character images over " << classes
         << " classes, " << words.entries.size() << " word images -> "
         << options.out_dir.string() << '\n';
  return kExitOk;
}

int cmd_train(const TrainOptions& options, const GlobalOptions& global, const Streams& io) {
  if (options.model_out.empty()) throw Error(ErrorCode::InvalidArgument, "--model is required");
  const Alphabet alphabet = Alphabet::legend_default();
  const DescriptorConfig config = descriptor_from(options.descriptor);
  const DatasetManifest manifest = load_manifest(options.manifest, ManifestKind::Characters, alphabet);
  const auto data =
      describe_manifest(manifest, alphabet, config, options.descriptor.smoothing, options.background);
  if (options.background &&
      std::none_of(data.begin(), data.end(), [](const auto& d) { return d.label == kBackground; })) {
    throw Error(ErrorCode::EmptyClass, "--background given but the manifest has no BG entries");
  }
  if (io.verbose) io.log() << "described " << data.size() << " training images\n";

  TrainParams params;
  params.seed = global.seed;
  params.alphabet = alphabet;
  params.descriptor_config = config;

  if (options.C) {
    params.C = *options.C;
    io.out << "C = " << fmt("%g", params.C) << " (fixed, no cross-validation)\n";
  } else {
    std::vector<double> grid = parse_number_list(options.c_grid, "--c-grid");
    if (grid.empty()) grid = default_c_grid();
    const auto cv = cross_validate(data, grid, options.folds, params, global.threads);
    io.out << options.folds << "-fold cross-validation (" << to_string(config.spectrum) << ")\n";
    io.out << "C";
    for (int f = 0; f < options.folds; ++f) io.out << "\tfold" << f + 1;
    io.out << "\tmean\n";
    for (std::size_t c = 0; c < cv.c_grid.size(); ++c) {
      io.out << fmt("%g", cv.c_grid[c]);
      for (double acc : cv.fold_accuracies[c]) io.out << '\t' << fmt("%.4f", acc);
      io.out << '\t' << fmt("%.4f", cv.mean_accuracies[c])
             << (cv.c_grid[c] == cv.best_C ? "\t*" : "") << '\n';
    }
    io.out << "best C = " << fmt("%g", cv.best_C) << '\n';
    params.C = cv.best_C;
  }
  const SvmModel model = train(data, params);
  save_model(model, options.model_out);
  io.out << "model: " << model.classes.size() << " classes, dimension " << model.dimension()
         << " -> " << options.model_out.string() << '\n';
  return kExitOk;
}

int cmd_eval_chars(const EvalCharsOptions& options, const GlobalOptions&, const Streams& io) {
  const SvmModel model = load_model(options.model);
  const DescriptorConfig& config = model_descriptor(model);
  const DatasetManifest manifest =
      load_manifest(options.manifest, ManifestKind::Characters, model.alphabet);
  const auto test = describe_manifest(manifest, model.alphabet, config, options.smoothing, true);
  const CharAccuracy result = char_accuracy(model, test);
  const RateTable rates = fn_fp_rates(result.matrix);
  fs::create_directories(options.report_dir);
  write_char_reports(options.report_dir, result, rates);
  io.out << format_char_report_text(result, rates);
  return kExitOk;
}

int cmd_recognize(const RecognizeOptions& options, const GlobalOptions& global, const Streams& io) {
  if (options.image.empty() == options.manifest.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --image and --manifest");
  }
  if (options.top_k < 1) throw Error(ErrorCode::InvalidArgument, "--top-k must be >= 1");
  const SvmModel model = load_model(options.word.model);
  const Lexicon lexicon = lexicon_from(options.word.lexicon, model.alphabet);

  if (!options.image.empty()) {
    const ScoreMap map = score_word_image(options.image, model, options.word, global.threads);
    const auto ranking = recognize(map, lexicon, pictorial_for(map, model, options.lambda, options.theta),
                                   global.threads);
    print_ranking(options.image.string(), ranking, options.top_k, io.out);
    if (!options.ranking_csv.empty()) write_recognition_csv(ranking, options.ranking_csv);
    return kExitOk;
  }

  const DatasetManifest manifest = load_manifest(options.manifest, ManifestKind::Words, model.alphabet);
  std::vector<WordResult> results;
  for (const auto& entry : manifest.entries) {
    const ScoreMap map = score_word_image(entry.path, model, options.word, global.threads);
    const auto ranking = recognize(map, lexicon, pictorial_for(map, model, options.lambda, options.theta),
                                   global.threads);
    print_ranking(entry.path.string() + " (truth " + entry.label + ")", ranking, options.top_k,
                  io.out);
    results.push_back({entry.label, ranking.front().word(),
                       ranking.front().configuration.normalized_cost});
  }
  fs::create_directories(options.report_dir);
  write_word_reports(options.report_dir, results);
  std::size_t hits = 0;
  for (const auto& r : results) hits += words_match(r.truth, r.recognized) ? 1 : 0;
  io.out << "word accuracy " << fmt("%.2f%%", 100.0 * word_accuracy(results)) << " (" << hits
         << "/" << results.size() << ")\n";
  return kExitOk;
}

int cmd_sweep(const SweepOptions& options, const GlobalOptions& global, const Streams& io) {
  const SvmModel model = load_model(options.word.model);
  const Lexicon lexicon = lexicon_from(options.word.lexicon, model.alphabet);
  const auto lambdas = parse_number_list(options.lambdas, "--lambdas");
  std::vector<std::optional<double>> thetas;
  for (double t : parse_number_list(options.thetas, "--thetas")) thetas.emplace_back(t);
  if (thetas.empty()) thetas.emplace_back(std::nullopt);
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "--lambdas needs at least one value");

  const DatasetManifest manifest = load_manifest(options.manifest, ManifestKind::Words, model.alphabet);
  std::vector<ScoredWord> words;
  for (const auto& entry : manifest.entries) {
    words.push_back({entry.label, entry.path.string(),
                     score_word_image(entry.path, model, options.word, global.threads)});
    if (io.verbose) io.log() << "scored " << entry.path.string() << '\n';
  }

  io.out << "lambda,theta,accuracy,correct,total\n";
  double best_accuracy = -1.0;
  std::string best;
  for (double lambda : lambdas) {
    for (const auto& theta : thetas) {
      std::vector<WordResult> results;
      double theta_used = 0.0;
      for (const auto& w : words) {
        const PictorialModel pm = pictorial_for(w.map, model, lambda, theta);
        theta_used = pm.theta;
        const auto ranking = recognize(w.map, lexicon, pm, global.threads);
        results.push_back({w.truth, ranking.front().word(), ranking.front().configuration.normalized_cost});
      }
      const double acc = word_accuracy(results);
      std::size_t hits = 0;
      for (const auto& r : results) hits += words_match(r.truth, r.recognized) ? 1 : 0;
      const std::string row = fmt("%g", lambda) + "," + fmt("%g", theta_used) + "," +
                              fmt("%.6f", acc) + "," + std::to_string(hits) + "," +
                              std::to_string(results.size());
      io.out << row << '\n';
      if (acc > best_accuracy) {
        best_accuracy = acc;
        best = "best lambda=" + fmt("%g", lambda) + " theta=" + fmt("%g", theta_used) +
               " accuracy=" + fmt("%.2f%%", 100.0 * acc);
      }
    }
  }
  io.out << best << '\n';
  return kExitOk;
}

}  // namespace legend::cli
