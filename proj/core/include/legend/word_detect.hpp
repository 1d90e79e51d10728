#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "legend/classifier.hpp"
#include "legend/keypoint_grid.hpp"

namespace legend {

/// Letter that the classifier has no class for; it is dropped from the
/// matching form of lexicon words but kept in their reported spelling.
inline constexpr char kUnmatchableSymbol = 'I';

/// The letters a word is matched with, plus the number of letter slots
/// between consecutive matched letters (1 normally, 2 when an 'I' was
/// dropped between them, and so on).
struct MatchingForm {
  std::string letters;
  std::vector<int> slots;  // size letters.size() - 1
};

/// Throws EmptyWord when nothing matchable remains, UnknownSymbol for
/// letters outside alphabet + 'I'.
MatchingForm matching_form(std::string_view word, const Alphabet& alphabet);

/// The word with every 'I' removed.
std::string strip_unmatchable(std::string_view word);

class Lexicon {
 public:
  explicit Lexicon(std::vector<std::string> words,
                   const Alphabet& alphabet = Alphabet::legend_default());

  /// The built-in 35-word list of Roman Republican coin legends.
  static Lexicon legend_default();
  /// One uppercase word per line; '#' starts a comment.
  static Lexicon load(const std::filesystem::path& path,
                      const Alphabet& alphabet = Alphabet::legend_default());

  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
};

/// Parameters of the letter-chain pictorial structure.
struct PictorialModel {
  /// Weight of matching costs; deformation gets 1 - lambda.
  double lambda = 0.7;
  /// Largest allowed horizontal distance between consecutive letters.
  double theta = 112.5;
  /// Rest length of the spring between neighbouring letters.
  double expected_spacing = 75.0;
  double vertical_weight = 1.0;
  /// Letters closer than this fraction of expected_spacing intersect.
  double min_pitch_fraction = 0.5;

  /// Defaults for a word image of height H: spacing = descriptor window,
  /// theta = 1.5 * spacing.
  static PictorialModel for_height(int image_height,
                                   const DescriptorConfig& config = DescriptorConfig{});

  void validate() const;
};

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

/// Negated decision value of `symbol`.
double matching_cost(const ClassScores& scores, const Alphabet& alphabet, char symbol);

/// True when `to` may follow `from` under the non-intersection, maximum
/// gap and left-to-right constraints. `slots` widens the allowed range for
/// letter pairs that straddle a dropped 'I'.
bool placement_feasible(GridPoint from, GridPoint to, const PictorialModel& model, int slots = 1);

/// ((dx - slots*s)/s)^2 + vertical_weight * (dy/s)^2 with s the expected
/// spacing. Throws ConstraintViolation for infeasible pairs.
double deformation_cost(GridPoint from, GridPoint to, const PictorialModel& model, int slots = 1);

struct WordConfiguration {
  std::string word;
  std::string matching_letters;
  std::vector<GridPoint> placements;
  double total_cost = kInfeasibleCost;
  double normalized_cost = kInfeasibleCost;

  bool feasible() const noexcept { return !placements.empty(); }
};

/// Backward DP tables. cost[i][k] is the optimal cost of placing letters
/// i..n-1 with letter i fixed at location k (kInfeasibleCost when no valid
/// chain exists); next[i][k] is the chosen location of letter i+1 (-1 for
/// the last letter or infeasible entries).
struct WordDp {
  MatchingForm form;
  std::vector<std::vector<double>> cost;
  std::vector<std::vector<int>> next;
};

/// D_i(k) = lambda*s(k, c_i) + min_j [(1-lambda)*d(k, j) + D_{i+1}(j)] over
/// feasible successors j. Locations are sorted by x, so the successors of
/// k form a contiguous index range found by binary search; the cost is
/// O(n * m * f) for n letters, m locations and f successors per location.
/// Ties go to the earliest location in map order.
WordDp solve_word_dp(const ScoreMap& map, const MatchingForm& form, const PictorialModel& model);

/// Optimal placement of `word` on the map. Infeasible words come back with
/// no placements and infinite cost.
WordConfiguration detect_word(const ScoreMap& map, std::string_view word,
                              const PictorialModel& model);

struct RankedWord {
  std::size_t lexicon_index = 0;
  WordConfiguration configuration;

  const std::string& word() const noexcept { return configuration.word; }
};

/// All lexicon words ranked by normalized cost; infeasible words last, ties
/// broken lexicographically and then by lexicon position.
std::vector<RankedWord> recognize(const ScoreMap& map, const Lexicon& lexicon,
                                  const PictorialModel& model, int threads = 1);

/// "x:y;x:y;..."
std::string format_placements(const std::vector<GridPoint>& placements);

/// CSV rows word,normalized_cost,placements.
void write_recognition_csv(const std::vector<RankedWord>& ranking,
                           const std::filesystem::path& path);

}  // namespace legend
