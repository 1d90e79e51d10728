#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace legend::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Search {
  const ScoreMap& map;
  const MatchingForm& form;
  const PictorialModel& model;
  EnumerationResult result{kInf, {}};
  std::vector<std::size_t> chain;

  double letter_cost(std::size_t letter, std::size_t location) const {
    return model.lambda * matching_cost(map.scores[location], map.alphabet, form.letters[letter]);
  }

  void extend(double cost) {
    const std::size_t depth = chain.size();
    if (depth == form.letters.size()) {
      std::vector<GridPoint> placement;
      for (std::size_t k : chain) placement.push_back(map.locations[k]);
      if (cost < result.cost - 1e-9) {
        result.cost = cost;
        result.optima = {placement};
      } else if (std::abs(cost - result.cost) <= 1e-9) {
        result.optima.push_back(placement);
        result.cost = std::min(result.cost, cost);
      }
      return;
    }
    for (std::size_t k = 0; k < map.locations.size(); ++k) {
      double next = cost + letter_cost(depth, k);
      if (depth > 0) {
        const GridPoint from = map.locations[chain.back()];
        const GridPoint to = map.locations[k];
        const int slots = form.slots[depth - 1];
        if (!placement_feasible(from, to, model, slots)) continue;
        next += (1.0 - model.lambda) * deformation_cost(from, to, model, slots);
      }
      chain.push_back(k);
      extend(next);
      chain.pop_back();
    }
  }
};

}  // namespace

EnumerationResult enumerate_word(const ScoreMap& map, const MatchingForm& form,
                                 const PictorialModel& model) {
  Search search{map, form, model};
  search.extend(0.0);
  // Re-tighten the tie set against the final minimum.
  std::erase_if(search.result.optima, [&](const std::vector<GridPoint>& chain) {
    double cost = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const auto k = static_cast<std::size_t>(
          std::find(map.locations.begin(), map.locations.end(), chain[i]) - map.locations.begin());
      cost += search.letter_cost(i, k);
      if (i > 0) {
        cost += (1.0 - model.lambda) *
                deformation_cost(chain[i - 1], chain[i], model, form.slots[i - 1]);
      }
    }
    return cost > search.result.cost + 1e-9;
  });
  return search.result;
}

double recursion_residual(const ScoreMap& map, const WordDp& dp, const PictorialModel& model) {
  const std::size_t n = dp.form.letters.size();
  const std::size_t m = map.locations.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const double s =
          model.lambda * matching_cost(map.scores[k], map.alphabet, dp.form.letters[i]);
      double expected = s;
      if (i + 1 < n) {
        double best = kInf;
        for (std::size_t j = 0; j < m; ++j) {
          const int slots = dp.form.slots[i];
          if (!placement_feasible(map.locations[k], map.locations[j], model, slots)) continue;
          if (std::isinf(dp.cost[i + 1][j])) continue;
          best = std::min(best, (1.0 - model.lambda) *
                                        deformation_cost(map.locations[k], map.locations[j],
                                                         model, slots) +
                                    dp.cost[i + 1][j]);
        }
        expected = std::isinf(best) ? kInf : s + best;
      }
      const double actual = dp.cost[i][k];
      if (std::isinf(expected) != std::isinf(actual)) return kInf;
      if (!std::isinf(expected)) worst = std::max(worst, std::abs(expected - actual));
    }
  }
  return worst;
}

std::vector<double> reference_descriptor(const GradientField& field, PixelPoint center,
                                         double window, const DescriptorConfig& config) {
  const int cells = config.grid_cells;
  const int bins = config.bins_per_cell;
  const double range =
      config.spectrum == SpectrumMode::Full360 ? 2.0 * std::numbers::pi : std::numbers::pi;
  const double cell = window / cells;
  const double sigma = window / 2.0;
  std::vector<double> hist(static_cast<std::size_t>(cells * cells * bins), 0.0);

  for (int y = 0; y < field.height(); ++y) {
    for (int x = 0; x < field.width(); ++x) {
      const double dx = x - center.x;
      const double dy = y - center.y;
      const double gauss = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      const double mag = field.magnitude(x, y) * gauss;
      const double u = dx / cell + cells / 2.0 - 0.5;
      const double v = dy / cell + cells / 2.0 - 0.5;
      const double t = fold_orientation(field.orientation(x, y), config.spectrum) * bins / range;
      for (int cy = 0; cy < cells; ++cy) {
        const double wy = std::max(0.0, 1.0 - std::abs(v - cy));
        for (int cx = 0; cx < cells; ++cx) {
          const double wx = std::max(0.0, 1.0 - std::abs(u - cx));
          for (int b = 0; b < bins; ++b) {
            double d = std::abs(t - (b + 0.5));
            d = std::min(d, bins - d);
            const double wt = std::max(0.0, 1.0 - d);
            hist[static_cast<std::size_t>((cy * cells + cx) * bins + b)] += mag * wx * wy * wt;
          }
        }
      }
    }
  }

  double norm = 0.0;
  for (double h : hist) norm += h * h;
  norm = std::sqrt(norm);
  if (norm <= 1e-12) return std::vector<double>(hist.size(), 0.0);
  for (double& h : hist) h = std::min(h / norm, 0.2);
  norm = 0.0;
  for (double h : hist) norm += h * h;
  norm = std::sqrt(norm);
  for (double& h : hist) h /= norm;
  return hist;
}

double gaussian_center_weight_2d(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) sum += std::exp(-(k * k) / (2.0 * sigma * sigma));
  return 1.0 / (sum * sum);
}

}  // namespace legend::testing
