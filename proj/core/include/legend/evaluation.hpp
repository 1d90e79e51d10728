#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "legend/classifier.hpp"

namespace legend {

/// counts[truth][prediction] over `classes` (alphabet order, then "BG").
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> counts;

  explicit ConfusionMatrix(std::vector<std::string> class_names = {});

  void add(std::size_t truth, std::size_t prediction);
  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  std::size_t row_sum(std::size_t truth) const;
};

struct CharAccuracy {
  double accuracy = 0.0;
  ConfusionMatrix matrix;
};

CharAccuracy char_accuracy(const SvmModel& model, std::span<const LabeledDescriptor> test);

struct ClassRates {
  std::string name;
  std::size_t fn_count = 0;
  std::size_t fp_count = 0;
  double fn_rate = 0.0;
  double fp_rate = 0.0;
};

/// Per-class false-negative / false-positive rates. Every rate is divided
/// by the whole test-set size, so the totals (sums over classes) equal the
/// overall error rate.
struct RateTable {
  std::vector<ClassRates> classes;
  std::size_t denominator = 0;
  double total_fn_rate = 0.0;
  double total_fp_rate = 0.0;
  std::size_t abs_fn = 0;
  std::size_t abs_fp = 0;
};

RateTable fn_fp_rates(const ConfusionMatrix& matrix);

struct WordResult {
  std::string truth;
  std::string recognized;
  double normalized_cost = 0.0;
};

/// True when the words agree once every 'I' is removed from both.
bool words_match(const std::string& truth, const std::string& recognized);

/// Fraction of exact matches after 'I'-stripping both sides.
double word_accuracy(std::span<const WordResult> results);

std::string format_char_report_text(const CharAccuracy& result, const RateTable& rates);
std::string format_char_report_csv(const RateTable& rates);
std::string format_word_report_text(std::span<const WordResult> results);
std::string format_word_report_csv(std::span<const WordResult> results);

/// report_chars.txt and report_chars.csv inside `dir`.
void write_char_reports(const std::filesystem::path& dir, const CharAccuracy& result,
                        const RateTable& rates);
/// report_words.txt and report_words.csv inside `dir`.
void write_word_reports(const std::filesystem::path& dir, std::span<const WordResult> results);

}  // namespace legend
