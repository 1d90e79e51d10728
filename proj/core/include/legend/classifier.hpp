#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "legend/descriptor.hpp"

namespace legend {

/// Ordered set of distinct symbols. The default legend alphabet has 18
/// letters; 'I' is left out because its stroke is a part of many others.
class Alphabet {
 public:
  /// Throws InvalidArgument on duplicates or an empty symbol list.
  explicit Alphabet(std::string symbols);

  static Alphabet legend_default();

  const std::string& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  char symbol(std::size_t index) const { return symbols_.at(index); }
  std::optional<std::size_t> index_of(char symbol) const noexcept;
  bool contains(char symbol) const noexcept { return index_of(symbol).has_value(); }

  bool operator==(const Alphabet&) const = default;

 private:
  std::string symbols_;
};

/// Class index into an Alphabet, or kBackground.
using Label = int;
inline constexpr Label kBackground = -1;

struct LabeledDescriptor {
  Descriptor descriptor;
  Label label = kBackground;
};

struct ClassWeights {
  Label label = kBackground;
  double bias = 0.0;
  std::vector<double> weights;

  bool operator==(const ClassWeights&) const = default;
};

/// One-vs-rest linear SVM. `classes` holds one entry per alphabet symbol in
/// alphabet order, followed by the background class when present.
struct SvmModel {
  Alphabet alphabet = Alphabet::legend_default();
  bool has_background = false;
  std::vector<ClassWeights> classes;
  double C = 1.0;
  /// Descriptor settings used for training; absent for models trained on
  /// hand-made vectors.
  std::optional<DescriptorConfig> descriptor_config;

  std::size_t dimension() const noexcept {
    return classes.empty() ? 0 : classes.front().weights.size();
  }
  std::uint64_t config_hash() const {
    return descriptor_config ? descriptor_config->hash() : 0;
  }

  bool operator==(const SvmModel&) const = default;
};

/// Decision values w.x + b per alphabet symbol; the background score, when
/// the model has one, is kept apart so word detection never sees it.
struct ClassScores {
  std::vector<double> scores;
  std::optional<double> background;
};

struct TrainParams {
  double C = 1.0;
  std::uint64_t seed = 0;
  Alphabet alphabet = Alphabet::legend_default();
  std::optional<DescriptorConfig> descriptor_config;
  /// Dual coordinate descent stops once the relative duality gap drops
  /// below `tolerance` or after `max_epochs` sweeps.
  int max_epochs = 1000;
  double tolerance = 1e-4;
};

/// Trains one L2-regularized hinge-loss binary SVM per class by dual
/// coordinate descent. The bias is learned as the weight of a constant
/// feature 1. Example order is shuffled once from `seed`; training is
/// fully deterministic.
///
/// Every alphabet symbol needs at least one example (EmptyClass). Examples
/// labeled kBackground add a background class.
SvmModel train(std::span<const LabeledDescriptor> data, const TrainParams& params);

/// Default C grid: 2^-5, 2^-3, ..., 2^7.
std::vector<double> default_c_grid();

struct CrossValidationResult {
  double best_C = 0.0;
  std::vector<double> c_grid;
  /// fold_accuracies[c][fold]
  std::vector<std::vector<double>> fold_accuracies;
  std::vector<double> mean_accuracies;
};

/// Stratified k-fold assignment: within each class (background included)
/// the examples are shuffled from `seed` and dealt round-robin to folds.
std::vector<int> stratified_folds(std::span<const LabeledDescriptor> data, int folds,
                                  std::uint64_t seed);

/// Selects C by stratified k-fold cross-validation. Ties go to the smaller
/// C. `threads` > 1 evaluates (C, fold) pairs concurrently with identical
/// results.
CrossValidationResult cross_validate(std::span<const LabeledDescriptor> data,
                                     std::span<const double> c_grid, int folds,
                                     const TrainParams& params, int threads = 1);

ClassScores score(const SvmModel& model, const Descriptor& d);

/// Argmax over every trained class including background; ties resolve to
/// the earlier class in alphabet order (background last).
Label classify(const SvmModel& model, const Descriptor& d);

/// Symbol for a label, "BG" for background.
std::string label_name(const Alphabet& alphabet, Label label);

void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

/// Text form used by save_model; exposed for byte-level tests.
std::string serialize_model(const SvmModel& model);
SvmModel parse_model(std::string_view text);

}  // namespace legend
