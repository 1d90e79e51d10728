#include "legend/word_detect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "legend/error.hpp"
#include "legend/parallel.hpp"

namespace legend {

MatchingForm matching_form(std::string_view word, const Alphabet& alphabet) {
  MatchingForm form;
  int pending_slots = 1;
  for (char c : word) {
    if (c == kUnmatchableSymbol && !alphabet.contains(c)) {
      if (!form.letters.empty()) ++pending_slots;
      continue;
    }
    if (!alphabet.contains(c)) {
      throw Error(ErrorCode::UnknownSymbol,
                  std::string("symbol '") + c + "' in word '" + std::string(word) + "'");
    }
    if (!form.letters.empty()) form.slots.push_back(pending_slots);
    form.letters.push_back(c);
    pending_slots = 1;
  }
  if (form.letters.empty()) {
    throw Error(ErrorCode::EmptyWord, "word '" + std::string(word) + "' has no matchable letters");
  }
  return form;
}

std::string strip_unmatchable(std::string_view word) {
  std::string out;
  for (char c : word) {
    if (c != kUnmatchableSymbol) out.push_back(c);
  }
  return out;
}

Lexicon::Lexicon(std::vector<std::string> words, const Alphabet& alphabet)
    : words_(std::move(words)) {
  if (words_.empty()) throw Error(ErrorCode::EmptyLexicon, "lexicon has no words");
  for (const auto& w : words_) matching_form(w, alphabet);
}

Lexicon Lexicon::legend_default() {
  return Lexicon({"ROMA",    "CASSI",   "ASIAG",   "CREPVSI", "PANSA",    "BRVTVS",  "CAESAR",
                  "SCIPIO",  "PISO",    "FRVGI",   "CATO",    "METELLVS", "SVLLA",   "MARCELLVS",
                  "LENTVLVS", "NERVA",  "CRASSVS", "BALBVS",  "DOSSEN",   "CALDVS",  "FLAMINI",
                  "POMPEI",  "LONGIN",  "TVRDVS",  "PVLCHER", "MVSA",     "SABINVS", "HOSIDI",
                  "PAETVS",  "LEPIDVS", "SERVILI", "NASO",    "REX",      "AXSIVS",  "VARRO"});
}

Lexicon Lexicon::load(const std::filesystem::path& path, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "lexicon " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  return Lexicon(std::move(words), alphabet);
}

PictorialModel PictorialModel::for_height(int image_height, const DescriptorConfig& config) {
  PictorialModel model;
  model.expected_spacing = character_window(image_height, config);
  model.theta = 1.5 * model.expected_spacing;
  return model;
}

void PictorialModel::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
  }
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be > 0");
  if (!(expected_spacing > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "expected_spacing must be > 0");
  }
  if (!(vertical_weight >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "vertical_weight must be >= 0");
  }
  if (!(min_pitch_fraction > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_pitch_fraction must be > 0");
  }
}

double matching_cost(const ClassScores& scores, const Alphabet& alphabet, char symbol) {
  const auto index = alphabet.index_of(symbol);
  if (!index || *index >= scores.scores.size()) {
    throw Error(ErrorCode::UnknownSymbol, std::string("symbol '") + symbol + "' not scored");
  }
  return -scores.scores[*index];
}

namespace {

double min_gap(const PictorialModel& model, int slots) {
  return slots * model.min_pitch_fraction * model.expected_spacing;
}

double max_gap(const PictorialModel& model, int slots) {
  return model.theta + (slots - 1) * model.expected_spacing;
}

double spring(GridPoint from, GridPoint to, const PictorialModel& model, int slots) {
  const double s = model.expected_spacing;
  const double dx = (to.x - from.x - slots * s) / s;
  const double dy = (to.y - from.y) / s;
  return dx * dx + model.vertical_weight * dy * dy;
}

}  // namespace

bool placement_feasible(GridPoint from, GridPoint to, const PictorialModel& model, int slots) {
  const int dx = to.x - from.x;
  return dx > 0 && dx >= min_gap(model, slots) && dx <= max_gap(model, slots);
}

double deformation_cost(GridPoint from, GridPoint to, const PictorialModel& model, int slots) {
  if (to.x <= from.x) {
    throw Error(ErrorCode::ConstraintViolation, "letters must run left to right");
  }
  if (to.x - from.x < min_gap(model, slots)) {
    throw Error(ErrorCode::ConstraintViolation, "letters intersect");
  }
  if (to.x - from.x > max_gap(model, slots)) {
    throw Error(ErrorCode::ConstraintViolation, "gap exceeds theta");
  }
  return spring(from, to, model, slots);
}

WordDp solve_word_dp(const ScoreMap& map, const MatchingForm& form, const PictorialModel& model) {
  model.validate();
  if (form.letters.empty()) throw Error(ErrorCode::EmptyWord, "empty matching form");
  if (map.locations.empty()) throw Error(ErrorCode::EmptyGrid, "score map has no locations");

  const std::size_t n = form.letters.size();
  const std::size_t m = map.locations.size();
  std::vector<int> xs(m);
  for (std::size_t k = 0; k < m; ++k) xs[k] = map.locations[k].x;

  WordDp dp;
  dp.form = form;
  dp.cost.assign(n, std::vector<double>(m, kInfeasibleCost));
  dp.next.assign(n, std::vector<int>(m, -1));

  const double lambda = model.lambda;
  for (std::size_t k = 0; k < m; ++k) {
    dp.cost[n - 1][k] = lambda * matching_cost(map.scores[k], map.alphabet, form.letters[n - 1]);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const int slots = form.slots[i];
    const auto& successor_cost = dp.cost[i + 1];
    for (std::size_t k = 0; k < m; ++k) {
      const GridPoint from = map.locations[k];
      const double lo = from.x + std::max(min_gap(model, slots), 1.0);
      const double hi = from.x + max_gap(model, slots);
      auto first = std::lower_bound(xs.begin(), xs.end(), static_cast<int>(std::ceil(lo)));
      double best = kInfeasibleCost;
      int best_j = -1;
      for (auto it = first; it != xs.end() && *it <= hi; ++it) {
        const auto j = static_cast<std::size_t>(it - xs.begin());
        if (successor_cost[j] == kInfeasibleCost) continue;
        const double candidate =
            (1.0 - lambda) * spring(from, map.locations[j], model, slots) + successor_cost[j];
        if (candidate < best) {
          best = candidate;
          best_j = static_cast<int>(j);
        }
      }
      if (best_j >= 0) {
        dp.cost[i][k] =
            lambda * matching_cost(map.scores[k], map.alphabet, form.letters[i]) + best;
        dp.next[i][k] = best_j;
      }
    }
  }
  return dp;
}

WordConfiguration detect_word(const ScoreMap& map, std::string_view word,
                              const PictorialModel& model) {
  if (word.empty()) throw Error(ErrorCode::EmptyWord, "empty word");
  const MatchingForm form = matching_form(word, map.alphabet);
  const WordDp dp = solve_word_dp(map, form, model);

  WordConfiguration result;
  result.word = std::string(word);
  result.matching_letters = form.letters;
  const auto& first = dp.cost.front();
  int start = -1;
  for (std::size_t k = 0; k < first.size(); ++k) {
    if (first[k] == kInfeasibleCost) continue;
    if (start < 0 || first[k] < first[static_cast<std::size_t>(start)]) start = static_cast<int>(k);
  }
  if (start < 0) return result;

  result.total_cost = first[static_cast<std::size_t>(start)];
  int k = start;
  for (std::size_t i = 0; i < form.letters.size(); ++i) {
    result.placements.push_back(map.locations[static_cast<std::size_t>(k)]);
    k = dp.next[i][static_cast<std::size_t>(k)];
  }
  result.normalized_cost = result.total_cost / static_cast<double>(result.placements.size());
  return result;
}

std::vector<RankedWord> recognize(const ScoreMap& map, const Lexicon& lexicon,
                                  const PictorialModel& model, int threads) {
  if (lexicon.size() == 0) throw Error(ErrorCode::EmptyLexicon, "lexicon has no words");
  std::vector<RankedWord> ranking(lexicon.size());
  parallel_for(lexicon.size(), threads, [&](std::size_t i) {
    ranking[i].lexicon_index = i;
    ranking[i].configuration = detect_word(map, lexicon.words()[i], model);
  });
  std::stable_sort(ranking.begin(), ranking.end(), [](const RankedWord& a, const RankedWord& b) {
    const bool fa = a.configuration.feasible();
    const bool fb = b.configuration.feasible();
    if (fa != fb) return fa;
    if (fa && a.configuration.normalized_cost != b.configuration.normalized_cost) {
      return a.configuration.normalized_cost < b.configuration.normalized_cost;
    }
    if (a.word() != b.word()) return a.word() < b.word();
    return a.lexicon_index < b.lexicon_index;
  });
  return ranking;
}

std::string format_placements(const std::vector<GridPoint>& placements) {
  std::string out;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(placements[i].x) + ':' + std::to_string(placements[i].y);
  }
  return out;
}

void write_recognition_csv(const std::vector<RankedWord>& ranking,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "word,normalized_cost,placements\n";
  char buf[64];
  for (const auto& r : ranking) {
    out << r.word() << ',';
    if (r.configuration.feasible()) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), r.configuration.normalized_cost);
      out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    } else {
      out << "inf";
    }
    out << ',' << format_placements(r.configuration.placements) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace legend
