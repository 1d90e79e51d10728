#include "legend/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "legend/error.hpp"
#include "legend/parallel.hpp"

namespace legend {

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorCode::InvalidArgument, "empty alphabet");
  std::set<char> seen;
  for (char c : symbols_) {
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::InvalidArgument, std::string("duplicate symbol '") + c + "'");
    }
  }
}

Alphabet Alphabet::legend_default() { return Alphabet("ABCDEFGHLMNOPRSTVX"); }

std::optional<std::size_t> Alphabet::index_of(char symbol) const noexcept {
  const auto pos = symbols_.find(symbol);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

std::string label_name(const Alphabet& alphabet, Label label) {
  if (label == kBackground) return "BG";
  return std::string(1, alphabet.symbol(static_cast<std::size_t>(label)));
}

namespace {

struct DenseData {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> x;  // rows * dim
  std::vector<double> sq_norm;

  const double* row(std::size_t i) const { return x.data() + i * dim; }
};

DenseData pack(std::span<const LabeledDescriptor> data) {
  DenseData out;
  out.rows = data.size();
  out.dim = data.front().descriptor.size();
  out.x.reserve(out.rows * out.dim);
  out.sq_norm.reserve(out.rows);
  for (const auto& item : data) {
    out.x.insert(out.x.end(), item.descriptor.values.begin(), item.descriptor.values.end());
    double s = 0.0;
    for (double v : item.descriptor.values) s += v * v;
    out.sq_norm.push_back(s);
  }
  return out;
}

double dot(const double* a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) s += a[k] * b[k];
  return s;
}

// Binary L1-loss SVM dual: min 1/2 a'Qa - sum(a), 0 <= a_i <= C, with the
// bias folded in as an extra constant feature.
ClassWeights solve_binary(const DenseData& data, const std::vector<signed char>& y,
                          const std::vector<std::size_t>& order, const TrainParams& params) {
  const double C = params.C;
  std::vector<double> w(data.dim, 0.0);
  double b = 0.0;
  std::vector<double> alpha(data.rows, 0.0);

  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    for (std::size_t i : order) {
      const double* xi = data.row(i);
      const double yi = y[i];
      const double G = yi * (dot(xi, w) + b) - 1.0;
      double pg = G;
      if (alpha[i] == 0.0) {
        pg = std::min(G, 0.0);
      } else if (alpha[i] == C) {
        pg = std::max(G, 0.0);
      }
      if (std::abs(pg) <= 1e-12) continue;
      const double qii = data.sq_norm[i] + 1.0;
      const double updated = std::clamp(alpha[i] - G / qii, 0.0, C);
      const double step = (updated - alpha[i]) * yi;
      alpha[i] = updated;
      for (std::size_t k = 0; k < data.dim; ++k) w[k] += step * xi[k];
      b += step;
    }

    double w_sq = b * b;
    for (double v : w) w_sq += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
      hinge += std::max(0.0, 1.0 - y[i] * (dot(data.row(i), w) + b));
    }
    const double primal = 0.5 * w_sq + C * hinge;
    const double dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * w_sq;
    if (primal - dual <= params.tolerance * std::abs(primal)) break;
  }
  ClassWeights out;
  out.bias = b;
  out.weights = std::move(w);
  return out;
}

void validate_training_data(std::span<const LabeledDescriptor> data, const TrainParams& params) {
  if (!(params.C > 0.0) || !std::isfinite(params.C)) {
    throw Error(ErrorCode::InvalidC, "C must be a positive finite number");
  }
  if (data.empty()) throw Error(ErrorCode::EmptyClass, "no training examples");
  const std::size_t dim = data.front().descriptor.size();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "zero-length descriptors");
  const std::uint64_t expected_hash =
      params.descriptor_config ? params.descriptor_config->hash() : 0;
  for (const auto& item : data) {
    if (item.descriptor.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "descriptors differ in length");
    }
    if (expected_hash != 0 && item.descriptor.config_hash != 0 &&
        item.descriptor.config_hash != expected_hash) {
      throw Error(ErrorCode::ConfigMismatch, "descriptor config differs from training config");
    }
    if (item.label != kBackground &&
        (item.label < 0 || static_cast<std::size_t>(item.label) >= params.alphabet.size())) {
      throw Error(ErrorCode::InvalidArgument, "label outside the alphabet");
    }
  }
  if (params.descriptor_config &&
      static_cast<std::size_t>(params.descriptor_config->dimension()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "descriptor length does not match config");
  }
}

}  // namespace

SvmModel train(std::span<const LabeledDescriptor> data, const TrainParams& params) {
  validate_training_data(data, params);

  std::vector<std::size_t> counts(params.alphabet.size(), 0);
  bool has_background = false;
  for (const auto& item : data) {
    if (item.label == kBackground) {
      has_background = true;
    } else {
      ++counts[static_cast<std::size_t>(item.label)];
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::EmptyClass,
                  std::string("no examples for class '") + params.alphabet.symbol(c) + "'");
    }
  }
  if (counts.size() + (has_background ? 1 : 0) < 2) {
    throw Error(ErrorCode::EmptyClass, "training needs at least two classes");
  }

  const DenseData packed = pack(data);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(params.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Label> labels;
  for (std::size_t c = 0; c < params.alphabet.size(); ++c) labels.push_back(static_cast<Label>(c));
  if (has_background) labels.push_back(kBackground);

  SvmModel model;
  model.alphabet = params.alphabet;
  model.has_background = has_background;
  model.C = params.C;
  model.descriptor_config = params.descriptor_config;
  std::vector<signed char> y(data.size());
  for (Label label : labels) {
    for (std::size_t i = 0; i < data.size(); ++i) y[i] = data[i].label == label ? 1 : -1;
    ClassWeights cw = solve_binary(packed, y, order, params);
    cw.label = label;
    model.classes.push_back(std::move(cw));
  }
  return model;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 7; e += 2) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::vector<int> stratified_folds(std::span<const LabeledDescriptor> data, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::InvalidArgument, "cross-validation needs >= 2 folds");
  std::vector<Label> labels;
  for (const auto& item : data) labels.push_back(item.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<int> assignment(data.size(), 0);
  std::mt19937_64 rng(seed);
  for (Label label : labels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].label == label) members.push_back(i);
    }
    if (members.size() < static_cast<std::size_t>(folds)) {
      throw Error(ErrorCode::TooFewExamples,
                  "class has " + std::to_string(members.size()) + " examples for " +
                      std::to_string(folds) + " folds");
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t k = 0; k < members.size(); ++k) {
      assignment[members[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
  }
  return assignment;
}

CrossValidationResult cross_validate(std::span<const LabeledDescriptor> data,
                                     std::span<const double> c_grid, int folds,
                                     const TrainParams& params, int threads) {
  if (c_grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty C grid");
  for (double c : c_grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidC, "C grid entry <= 0");
  }
  const std::vector<int> assignment = stratified_folds(data, folds, params.seed);

  CrossValidationResult result;
  result.c_grid.assign(c_grid.begin(), c_grid.end());
  result.fold_accuracies.assign(c_grid.size(), std::vector<double>(static_cast<std::size_t>(folds)));

  const std::size_t tasks = c_grid.size() * static_cast<std::size_t>(folds);
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t ci = task / static_cast<std::size_t>(folds);
    const int fold = static_cast<int>(task % static_cast<std::size_t>(folds));
    std::vector<LabeledDescriptor> train_part;
    std::vector<const LabeledDescriptor*> held_out;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (assignment[i] == fold) {
        held_out.push_back(&data[i]);
      } else {
        train_part.push_back(data[i]);
      }
    }
    TrainParams fold_params = params;
    fold_params.C = c_grid[ci];
    const SvmModel model = train(train_part, fold_params);
    std::size_t correct = 0;
    for (const auto* item : held_out) {
      if (classify(model, item->descriptor) == item->label) ++correct;
    }
    result.fold_accuracies[ci][static_cast<std::size_t>(fold)] =
        static_cast<double>(correct) / static_cast<double>(held_out.size());
  });

  double best_mean = -1.0;
  for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
    const auto& row = result.fold_accuracies[ci];
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(folds);
    result.mean_accuracies.push_back(mean);
    if (mean > best_mean || (mean == best_mean && c_grid[ci] < result.best_C)) {
      best_mean = mean;
      result.best_C = c_grid[ci];
    }
  }
  return result;
}

namespace {

void check_compatible(const SvmModel& model, const Descriptor& d) {
  if (d.size() != model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "descriptor length " + std::to_string(d.size()) + " != model dimension " +
                    std::to_string(model.dimension()));
  }
  const std::uint64_t model_hash = model.config_hash();
  if (model_hash != 0 && d.config_hash != 0 && model_hash != d.config_hash) {
    throw Error(ErrorCode::ConfigMismatch, "descriptor computed with a different config");
  }
}

double decision_value(const ClassWeights& cw, const Descriptor& d) {
  double s = cw.bias;
  for (std::size_t k = 0; k < cw.weights.size(); ++k) s += cw.weights[k] * d.values[k];
  return s;
}

}  // namespace

ClassScores score(const SvmModel& model, const Descriptor& d) {
  check_compatible(model, d);
  ClassScores out;
  out.scores.reserve(model.alphabet.size());
  for (const auto& cw : model.classes) {
    const double v = decision_value(cw, d);
    if (cw.label == kBackground) {
      out.background = v;
    } else {
      out.scores.push_back(v);
    }
  }
  return out;
}

Label classify(const SvmModel& model, const Descriptor& d) {
  const ClassScores s = score(model, d);
  Label best = 0;
  double best_score = s.scores.front();
  for (std::size_t c = 1; c < s.scores.size(); ++c) {
    if (s.scores[c] > best_score) {
      best_score = s.scores[c];
      best = static_cast<Label>(c);
    }
  }
  if (s.background && *s.background > best_score) best = kBackground;
  return best;
}

}  // namespace legend
