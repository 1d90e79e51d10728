#include "legend/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "legend/error.hpp"

namespace legend::cli {

ConfigEntries parse_config(std::string_view text) {
  ConfigEntries entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "config line " + std::to_string(number) + ": expected key=value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (key.starts_with("--")) key.erase(0, 2);
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

namespace {

struct Options {
  GlobalOptions global;
  std::string config_path;
  SynthOptions synth;
  TrainOptions train;
  EvalCharsOptions eval;
  RecognizeOptions recognize;
  SweepOptions sweep;
  std::optional<double> train_c;
  std::optional<int> recognize_stride;
  std::optional<int> sweep_stride;
  std::optional<double> recognize_theta;
};

void add_descriptor_options(CLI::App* cmd, DescriptorOptions& d) {
  cmd->add_option("--spectrum", d.spectrum, "half180 or full360")->capture_default_str();
  cmd->add_option("--grid-cells", d.grid_cells, "spatial cells per side")->capture_default_str();
  cmd->add_option("--bins", d.bins, "orientation bins per cell")->capture_default_str();
  cmd->add_option("--scale-fraction", d.scale_fraction, "descriptor window / image height")
      ->capture_default_str();
  cmd->add_option("--smoothing", d.smoothing, "Gaussian pre-smoothing sigma")->capture_default_str();
}

void add_word_options(CLI::App* cmd, WordOptions& w, std::optional<int>& stride) {
  cmd->add_option("--model", w.model, "trained model file")->required();
  cmd->add_option("--lexicon", w.lexicon, "lexicon file (default: built-in 35 words)");
  cmd->add_option("--stride", stride, "grid stride in pixels (default H/20)");
  cmd->add_option("--ref-height", w.reference_height,
                  "word images more than 2x off this height are rescaled to it")
      ->capture_default_str();
  cmd->add_option("--smoothing", w.smoothing, "Gaussian pre-smoothing sigma")->capture_default_str();
}

void build(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", o.config_path, "key=value file; command-line flags take precedence");
  app.add_option("--seed", o.global.seed, "random seed")->capture_default_str();
  app.add_option("--threads", o.global.threads, "worker threads")->capture_default_str();
  app.add_flag("--verbose", o.global.verbose, "progress messages on stderr");

  auto* synth = app.add_subcommand("synth", "render a synthetic character and word dataset");
  synth->fallthrough();
  synth->add_option("--out", o.synth.out_dir, "output directory")->required();
  synth->add_option("--per-class", o.synth.per_class, "training images per class")->capture_default_str();
  synth->add_option("--test-per-class", o.synth.test_per_class, "test images per class")
      ->capture_default_str();
  synth->add_option("--train-azimuth", o.synth.train_azimuths, "light azimuths in degrees, comma separated")
      ->capture_default_str();
  synth->add_option("--test-azimuth", o.synth.test_azimuths, "light azimuths in degrees, comma separated")
      ->capture_default_str();
  synth->add_flag("--background", o.synth.background, "add background snippets as a class");
  synth->add_option("--lexicon", o.synth.lexicon, "words to render (default: built-in lexicon)");
  synth->add_option("--word-copies", o.synth.word_copies, "images per word, alternating lights")
      ->capture_default_str();
  synth->add_option("--curvature", o.synth.curvature, "baseline sagitta as a fraction of H")
      ->capture_default_str();
  synth->add_option("--image-size", o.synth.image_size, "character image side")->capture_default_str();

  auto* train = app.add_subcommand("train", "train a one-vs-rest SVM from a character manifest");
  train->fallthrough();
  train->add_option("--manifest", o.train.manifest, "character manifest")->required();
  train->add_option("--model", o.train.model_out, "output model file")->required();
  add_descriptor_options(train, o.train.descriptor);
  train->add_option("--c-grid", o.train.c_grid, "comma separated C values (default 2^-5..2^7)");
  train->add_option("--C", o.train_c, "fixed C, skips cross-validation");
  train->add_option("--folds", o.train.folds, "cross-validation folds")->capture_default_str();
  train->add_flag("--background", o.train.background, "train the background class from BG rows");

  auto* eval = app.add_subcommand("eval-chars", "character accuracy and FN/FP report");
  eval->fallthrough();
  eval->add_option("--model", o.eval.model, "trained model file")->required();
  eval->add_option("--manifest", o.eval.manifest, "character manifest")->required();
  eval->add_option("--report-dir", o.eval.report_dir, "where report_chars.* go")->capture_default_str();
  eval->add_option("--smoothing", o.eval.smoothing, "Gaussian pre-smoothing sigma")->capture_default_str();

  auto* rec = app.add_subcommand("recognize", "rank lexicon words for word images");
  rec->fallthrough();
  add_word_options(rec, o.recognize.word, o.recognize_stride);
  rec->add_option("--image", o.recognize.image, "single word image");
  rec->add_option("--manifest", o.recognize.manifest, "word manifest for batch mode");
  rec->add_option("--report-dir", o.recognize.report_dir, "where report_words.* go")
      ->capture_default_str();
  rec->add_option("--ranking-csv", o.recognize.ranking_csv, "full ranking of a single image");
  rec->add_option("--lambda", o.recognize.lambda, "matching/deformation trade-off")
      ->capture_default_str();
  rec->add_option("--theta", o.recognize_theta, "largest letter gap in pixels (default 1.5 pitch)");
  rec->add_option("--top-k", o.recognize.top_k, "ranked words printed per image")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "word accuracy over a lambda x theta grid");
  sweep->fallthrough();
  add_word_options(sweep, o.sweep.word, o.sweep_stride);
  sweep->add_option("--manifest", o.sweep.manifest, "word manifest")->required();
  sweep->add_option("--lambdas", o.sweep.lambdas, "comma separated lambda values")->capture_default_str();
  sweep->add_option("--thetas", o.sweep.thetas, "comma separated theta values in pixels");
}

CLI::Option* find_option(CLI::App& app, CLI::App* sub, const std::string& key) {
  const std::string name = "--" + key;
  if (sub != nullptr) {
    if (auto* opt = sub->get_option_no_throw(name)) return opt;
  }
  return app.get_option_no_throw(name);
}

// Config values become explicit arguments placed ahead of the real ones,
// so a flag given on the command line overrides the file.
std::vector<std::string> with_config(CLI::App& app, CLI::App* sub, const ConfigEntries& entries,
                                     const std::vector<std::string>& args) {
  std::vector<std::string> merged;
  std::vector<std::string> sub_args;
  for (const auto& [key, value] : entries) {
    CLI::Option* opt = find_option(app, sub, key);
    if (opt == nullptr || key == "config") {
      // Keys of other subcommands are allowed so one file can serve them all.
      const auto others = app.get_subcommands([&](const CLI::App* c) {
        return c != sub && c->get_option_no_throw("--" + key) != nullptr;
      });
      if (!others.empty() && key != "config") continue;
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
    const std::string token = "--" + key + "=" + value;
    (sub != nullptr && sub->get_option_no_throw("--" + key) == opt ? sub_args : merged)
        .push_back(token);
  }
  bool inserted = false;
  for (const auto& a : args) {
    merged.push_back(a);
    if (!inserted && sub != nullptr && a == sub->get_name()) {
      merged.insert(merged.end(), sub_args.begin(), sub_args.end());
      inserted = true;
    }
  }
  return merged;
}

int dispatch(CLI::App& app, Options& o, std::ostream& out, std::ostream& err) {
  const Streams io{out, err, o.global.verbose};
  if (app.got_subcommand("synth")) return cmd_synth(o.synth, o.global, io);
  if (app.got_subcommand("train")) {
    o.train.C = o.train_c;
    return cmd_train(o.train, o.global, io);
  }
  if (app.got_subcommand("eval-chars")) return cmd_eval_chars(o.eval, o.global, io);
  if (app.got_subcommand("recognize")) {
    o.recognize.word.stride = o.recognize_stride;
    o.recognize.theta = o.recognize_theta;
    return cmd_recognize(o.recognize, o.global, io);
  }
  o.sweep.word.stride = o.sweep_stride;
  return cmd_sweep(o.sweep, o.global, io);
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    }
  }
  return path;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Options options;
    CLI::App app("Binarization-free recognition of embossed coin legends", "legend");
    build(app, options);

    // The config file is read before parsing so that required options may
    // come from it.
    std::vector<std::string> merged = args;
    const auto config = find_config_path(args);
    if (config) {
      CLI::App* sub = nullptr;
      for (const auto& a : args) {
        if (auto* candidate = app.get_subcommand_no_throw(a)) {
          sub = candidate;
          break;
        }
      }
      merged = with_config(app, sub, read_config_file(*config), args);
    }
    std::reverse(merged.begin(), merged.end());
    try {
      app.parse(merged);
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    return dispatch(app, options, out, err);
  } catch (const Error& e) {
    err << "legend: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "legend: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "legend: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace legend::cli
