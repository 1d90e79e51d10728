#include "legend/evaluation.hpp"

#include <cstdio>
#include <fstream>

#include "legend/error.hpp"
#include "legend/word_detect.hpp"

namespace legend {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : classes(std::move(class_names)),
      counts(classes.size(), std::vector<std::size_t>(classes.size(), 0)) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t prediction) {
  counts.at(truth).at(prediction) += 1;
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) sum += v;
  }
  return sum;
}

std::size_t ConfusionMatrix::correct() const noexcept {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t sum = 0;
  for (std::size_t v : counts.at(truth)) sum += v;
  return sum;
}

CharAccuracy char_accuracy(const SvmModel& model, std::span<const LabeledDescriptor> test) {
  if (test.empty()) throw Error(ErrorCode::EmptyTestSet, "no test items");
  bool background = model.has_background;
  for (const auto& item : test) background = background || item.label == kBackground;

  std::vector<std::string> names;
  for (char c : model.alphabet.symbols()) names.emplace_back(1, c);
  if (background) names.emplace_back("BG");
  const std::size_t bg_index = model.alphabet.size();
  const auto index_of = [&](Label label) {
    if (label == kBackground) return bg_index;
    if (label < 0 || static_cast<std::size_t>(label) >= model.alphabet.size()) {
      throw Error(ErrorCode::InvalidArgument, "test label outside the model alphabet");
    }
    return static_cast<std::size_t>(label);
  };

  CharAccuracy result{0.0, ConfusionMatrix(std::move(names))};
  for (const auto& item : test) {
    result.matrix.add(index_of(item.label), index_of(classify(model, item.descriptor)));
  }
  result.accuracy =
      static_cast<double>(result.matrix.correct()) / static_cast<double>(result.matrix.total());
  return result;
}

RateTable fn_fp_rates(const ConfusionMatrix& matrix) {
  const std::size_t total = matrix.total();
  if (matrix.classes.empty() || total == 0) {
    throw Error(ErrorCode::EmptyMatrix, "confusion matrix has no entries");
  }
  RateTable table;
  table.denominator = total;
  const double denom = static_cast<double>(total);
  for (std::size_t c = 0; c < matrix.classes.size(); ++c) {
    ClassRates rates;
    rates.name = matrix.classes[c];
    rates.fn_count = matrix.row_sum(c) - matrix.counts[c][c];
    for (std::size_t t = 0; t < matrix.classes.size(); ++t) {
      if (t != c) rates.fp_count += matrix.counts[t][c];
    }
    rates.fn_rate = static_cast<double>(rates.fn_count) / denom;
    rates.fp_rate = static_cast<double>(rates.fp_count) / denom;
    table.abs_fn += rates.fn_count;
    table.abs_fp += rates.fp_count;
    table.classes.push_back(rates);
  }
  table.total_fn_rate = static_cast<double>(table.abs_fn) / denom;
  table.total_fp_rate = static_cast<double>(table.abs_fp) / denom;
  return table;
}

bool words_match(const std::string& truth, const std::string& recognized) {
  return strip_unmatchable(truth) == strip_unmatchable(recognized);
}

double word_accuracy(std::span<const WordResult> results) {
  if (results.empty()) throw Error(ErrorCode::EmptyTestSet, "no word results");
  std::size_t hits = 0;
  for (const auto& r : results) hits += words_match(r.truth, r.recognized) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

namespace {

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * rate);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string format_char_report_text(const CharAccuracy& result, const RateTable& rates) {
  std::string out;
  out += "# Character recognition report\n";
  out += "# FN/FP rates are divided by the full test-set size (N = " +
         std::to_string(rates.denominator) + ")\n";
  out += "accuracy " + percent(result.accuracy) + " (" + std::to_string(result.matrix.correct()) +
         "/" + std::to_string(result.matrix.total()) + ")\n\n";
  out += pad("Class", 8) + pad("FN", 10) + "FP\n";
  for (const auto& c : rates.classes) {
    out += pad(c.name, 8) + pad(percent(c.fn_rate), 10) + percent(c.fp_rate) + "\n";
  }
  out += pad("Total", 8) + pad(percent(rates.total_fn_rate), 10) + percent(rates.total_fp_rate) +
         "\n";
  out += pad("Abs", 8) + pad("(" + std::to_string(rates.abs_fn) + ")", 10) + "(" +
         std::to_string(rates.abs_fp) + ")\n";
  return out;
}

std::string format_char_report_csv(const RateTable& rates) {
  std::string out = "class,fn_rate,fp_rate,fn_count,fp_count\n";
  for (const auto& c : rates.classes) {
    out += c.name + ',' + fixed(c.fn_rate, 6) + ',' + fixed(c.fp_rate, 6) + ',' +
           std::to_string(c.fn_count) + ',' + std::to_string(c.fp_count) + '\n';
  }
  out += "Total," + fixed(rates.total_fn_rate, 6) + ',' + fixed(rates.total_fp_rate, 6) + ',' +
         std::to_string(rates.abs_fn) + ',' + std::to_string(rates.abs_fp) + '\n';
  out += "Abs,,," + std::to_string(rates.abs_fn) + ',' + std::to_string(rates.abs_fp) + '\n';
  return out;
}

std::string format_word_report_text(std::span<const WordResult> results) {
  std::string out = "# Word recognition report\n";
  out += "# words are compared after removing 'I' (no classifier class); such matches are "
         "marked *\n";
  out += "accuracy " + percent(word_accuracy(results)) + "\n\n";
  out += pad("truth", 12) + pad("recognized", 12) + "cost\n";
  for (const auto& r : results) {
    std::string mark = " ";
    if (words_match(r.truth, r.recognized)) mark = r.truth == r.recognized ? "=" : "*";
    out += pad(r.truth, 12) + pad(r.recognized, 12) + fixed(r.normalized_cost, 6) + " " + mark +
           "\n";
  }
  return out;
}

std::string format_word_report_csv(std::span<const WordResult> results) {
  std::string out = "truth,recognized,normalized_cost,match\n";
  for (const auto& r : results) {
    out += r.truth + ',' + r.recognized + ',' + fixed(r.normalized_cost, 6) + ',' +
           (words_match(r.truth, r.recognized) ? "1" : "0") + '\n';
  }
  return out;
}

void write_char_reports(const std::filesystem::path& dir, const CharAccuracy& result,
                        const RateTable& rates) {
  write_text(dir / "report_chars.txt", format_char_report_text(result, rates));
  write_text(dir / "report_chars.csv", format_char_report_csv(rates));
}

void write_word_reports(const std::filesystem::path& dir, std::span<const WordResult> results) {
  write_text(dir / "report_words.txt", format_word_report_text(results));
  write_text(dir / "report_words.csv", format_word_report_csv(results));
}

}  // namespace legend
