#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "legend/classifier.hpp"
#include "legend/error.hpp"

namespace legend {

namespace {

constexpr std::string_view kMagic = "legend-svm";
constexpr int kFormatVersion = 1;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::CorruptData, "bad number '" + std::string(token) + "'");
  }
  return v;
}

int parse_int(std::string_view token) {
  int v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::CorruptData, "bad integer '" + std::string(token) + "'");
  }
  return v;
}

std::uint32_t crc_of(std::string_view body) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size())));
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

// Reads one '\n'-terminated line; a missing terminator means truncation.
std::string_view take_line(std::string_view& text) {
  const auto end = text.find('\n');
  if (end == std::string_view::npos) throw Error(ErrorCode::CorruptData, "truncated model file");
  const std::string_view line = text.substr(0, end);
  text.remove_prefix(end + 1);
  return line;
}

std::vector<std::string_view> expect_key(std::string_view& text, std::string_view key,
                                         std::size_t values) {
  const auto tokens = split(take_line(text));
  if (tokens.size() != values + 1 || tokens[0] != key) {
    throw Error(ErrorCode::CorruptData, "expected header field '" + std::string(key) + "'");
  }
  return tokens;
}

}  // namespace

std::string serialize_model(const SvmModel& model) {
  std::string body;
  for (const auto& cw : model.classes) {
    body += label_name(model.alphabet, cw.label);
    body += ' ';
    body += format_double(cw.bias);
    for (double w : cw.weights) {
      body += ' ';
      body += format_double(w);
    }
    body += '\n';
  }

  std::string out;
  out += std::string(kMagic) + ' ' + std::to_string(kFormatVersion) + '\n';
  out += "alphabet " + model.alphabet.symbols() + '\n';
  if (model.descriptor_config) {
    const auto& cfg = *model.descriptor_config;
    out += "spectrum " + std::string(to_string(cfg.spectrum)) + '\n';
    out += "descriptor " + std::to_string(cfg.grid_cells) + ' ' +
           std::to_string(cfg.bins_per_cell) + ' ' + format_double(cfg.scale_fraction) + '\n';
  } else {
    out += "spectrum none\ndescriptor none\n";
  }
  out += "C " + format_double(model.C) + '\n';
  out += "has_background " + std::string(model.has_background ? "1" : "0") + '\n';
  out += "classes " + std::to_string(model.classes.size()) + ' ' +
         std::to_string(model.dimension()) + '\n';
  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", crc_of(body));
  out += std::string("crc32 ") + crc + '\n';
  out += body;
  return out;
}

SvmModel parse_model(std::string_view text) {
  {
    const auto tokens = split(take_line(text));
    if (tokens.size() != 2 || tokens[0] != kMagic) {
      throw Error(ErrorCode::CorruptData, "not a legend model file");
    }
    if (parse_int(tokens[1]) != kFormatVersion) {
      throw Error(ErrorCode::FormatVersionMismatch,
                  "model format version " + std::string(tokens[1]));
    }
  }
  SvmModel model;
  model.alphabet = Alphabet(std::string(expect_key(text, "alphabet", 1)[1]));

  const auto spectrum = expect_key(text, "spectrum", 1)[1];
  const auto descriptor = split(take_line(text));
  if (descriptor.empty() || descriptor[0] != "descriptor") {
    throw Error(ErrorCode::CorruptData, "expected header field 'descriptor'");
  }
  if (spectrum != "none") {
    if (descriptor.size() != 4) throw Error(ErrorCode::CorruptData, "bad descriptor field");
    DescriptorConfig cfg;
    cfg.spectrum = parse_spectrum(spectrum);
    cfg.grid_cells = parse_int(descriptor[1]);
    cfg.bins_per_cell = parse_int(descriptor[2]);
    cfg.scale_fraction = parse_double(descriptor[3]);
    cfg.validate();
    model.descriptor_config = cfg;
  }
  model.C = parse_double(expect_key(text, "C", 1)[1]);
  model.has_background = parse_int(expect_key(text, "has_background", 1)[1]) != 0;
  const auto shape = expect_key(text, "classes", 2);
  const int class_count = parse_int(shape[1]);
  const int dimension = parse_int(shape[2]);
  const std::string_view crc_text = expect_key(text, "crc32", 1)[1];

  char crc[16];
  std::snprintf(crc, sizeof(crc), "%08x", crc_of(text));
  if (crc_text != crc) throw Error(ErrorCode::ChecksumMismatch, "model body checksum mismatch");

  const std::size_t expected_classes = model.alphabet.size() + (model.has_background ? 1 : 0);
  if (class_count < 0 || static_cast<std::size_t>(class_count) != expected_classes) {
    throw Error(ErrorCode::CorruptData, "class count does not match alphabet");
  }
  for (std::size_t c = 0; c < expected_classes; ++c) {
    const auto tokens = split(take_line(text));
    if (tokens.size() != static_cast<std::size_t>(dimension) + 2) {
      throw Error(ErrorCode::CorruptData, "class row has wrong length");
    }
    ClassWeights cw;
    cw.label = c < model.alphabet.size() ? static_cast<Label>(c) : kBackground;
    if (tokens[0] != label_name(model.alphabet, cw.label)) {
      throw Error(ErrorCode::CorruptData, "class rows out of order");
    }
    cw.bias = parse_double(tokens[1]);
    cw.weights.reserve(static_cast<std::size_t>(dimension));
    for (std::size_t k = 2; k < tokens.size(); ++k) cw.weights.push_back(parse_double(tokens[k]));
    model.classes.push_back(std::move(cw));
  }
  if (!text.empty()) throw Error(ErrorCode::CorruptData, "trailing data after class rows");
  if (model.descriptor_config &&
      model.descriptor_config->dimension() != dimension) {
    throw Error(ErrorCode::CorruptData, "weight length does not match descriptor config");
  }
  return model;
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

SvmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open model " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(text);
}

}  // namespace legend
