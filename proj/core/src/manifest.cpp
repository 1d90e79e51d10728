#include <fstream>

#include "legend/dataset.hpp"
#include "legend/error.hpp"
#include "legend/word_detect.hpp"

namespace legend {

namespace fs = std::filesystem;

Label parse_character_label(const std::string& label, const Alphabet& alphabet) {
  if (label == "BG") return kBackground;
  if (label.size() == 1) {
    if (const auto index = alphabet.index_of(label[0])) return static_cast<Label>(*index);
  }
  throw Error(ErrorCode::BadLabel, "'" + label + "' is not a character class");
}

namespace {

void validate_word_label(const std::string& label, const Alphabet& alphabet) {
  for (char c : label) {
    if (c < 'A' || c > 'Z') throw Error(ErrorCode::BadLabel, "word label '" + label + "'");
  }
  try {
    matching_form(label, alphabet);
  } catch (const Error&) {
    throw Error(ErrorCode::BadLabel, "word label '" + label + "'");
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

DatasetManifest load_manifest(const fs::path& path, ManifestKind kind, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  DatasetManifest manifest;
  manifest.kind = kind;
  const fs::path base = path.parent_path();
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::CorruptData, "manifest row without comma: " + line);
    }
    const std::string file = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    const bool header = first && file == "path" && label == "label";
    first = false;
    if (header) continue;
    if (kind == ManifestKind::Characters) {
      parse_character_label(label, alphabet);
    } else {
      validate_word_label(label, alphabet);
    }
    const fs::path entry_path(file);
    manifest.entries.push_back({entry_path.is_absolute() ? entry_path : base / entry_path, label});
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::EmptyManifest, "manifest " + path.string() + " lists no entries");
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest " + path.string());
  const fs::path base = path.parent_path();
  out << "path,label\n";
  for (const auto& e : manifest.entries) {
    fs::path rel = base.empty() ? e.path : e.path.lexically_relative(base);
    if (rel.empty()) rel = e.path;
    out << rel.generic_string() << ',' << e.label << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace legend
