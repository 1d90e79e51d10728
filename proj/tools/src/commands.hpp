#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace legend::cli {

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool verbose = false;

  std::ostream& log() const { return err; }
};

struct SynthOptions {
  std::filesystem::path out_dir;
  int per_class = 50;
  int test_per_class = 5;
  std::string train_azimuths = "45";
  std::string test_azimuths = "225";
  bool background = false;
  std::filesystem::path lexicon;
  int word_copies = 2;
  double curvature = 0.0;
  int image_size = 100;
};

struct DescriptorOptions {
  std::string spectrum = "half180";
  int grid_cells = 4;
  int bins = 8;
  double scale_fraction = 0.75;
  double smoothing = 1.0;
};

struct TrainOptions {
  std::filesystem::path manifest;
  std::filesystem::path model_out;
  DescriptorOptions descriptor;
  std::string c_grid;
  std::optional<double> C;
  int folds = 5;
  bool background = false;
};

struct EvalCharsOptions {
  std::filesystem::path model;
  std::filesystem::path manifest;
  std::filesystem::path report_dir = ".";
  double smoothing = 1.0;
};

struct WordOptions {
  std::filesystem::path model;
  std::filesystem::path lexicon;
  std::optional<int> stride;
  int reference_height = 100;
  double smoothing = 1.0;
};

struct RecognizeOptions {
  WordOptions word;
  std::filesystem::path image;
  std::filesystem::path manifest;
  std::filesystem::path report_dir = ".";
  std::filesystem::path ranking_csv;
  double lambda = 0.7;
  std::optional<double> theta;
  int top_k = 3;
};

struct SweepOptions {
  WordOptions word;
  std::filesystem::path manifest;
  std::string lambdas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::string thetas;
};

/// Comma-separated numbers; empty input yields an empty list.
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

int cmd_synth(const SynthOptions& options, const GlobalOptions& global, const Streams& io);
int cmd_train(const TrainOptions& options, const GlobalOptions& global, const Streams& io);
int cmd_eval_chars(const EvalCharsOptions& options, const GlobalOptions& global,
                   const Streams& io);
int cmd_recognize(const RecognizeOptions& options, const GlobalOptions& global,
                  const Streams& io);
int cmd_sweep(const SweepOptions& options, const GlobalOptions& global, const Streams& io);

}  // namespace legend::cli
