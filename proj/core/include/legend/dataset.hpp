#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "legend/classifier.hpp"
#include "legend/descriptor.hpp"
#include "legend/image.hpp"

namespace legend {

enum class ManifestKind { Characters, Words };

struct ManifestEntry {
  std::filesystem::path path;
  std::string label;
};

/// Character labels are single alphabet symbols or "BG"; word labels are
/// uppercase words over the alphabet plus 'I'.
struct DatasetManifest {
  ManifestKind kind = ManifestKind::Characters;
  std::vector<ManifestEntry> entries;
};

/// Reads a path,label CSV (header row optional). Relative paths are
/// resolved against the manifest's directory. Duplicate paths are kept.
DatasetManifest load_manifest(const std::filesystem::path& path, ManifestKind kind,
                              const Alphabet& alphabet = Alphabet::legend_default());

/// Writes a path,label CSV with a header row. Entry paths (as resolvable
/// from the current directory) are written relative to the manifest's
/// directory, with '/' separators.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Label of a character entry: alphabet index or kBackground.
Label parse_character_label(const std::string& label, const Alphabet& alphabet);

/// Procedural embossed-relief renderer settings. Lengths are in pixels,
/// azimuth in radians measured counter-clockwise from the +x axis with y
/// pointing up.
struct EmbossConfig {
  int image_size = 100;
  double light_azimuth = 0.7853981633974483;
  double relief_height = 4.0;
  double noise_sigma = 0.01;
  double stroke_width = 12.0;
  std::uint64_t seed = 0;
  /// Light elevation above the surface plane, radians.
  double light_elevation = 0.3490658503988659;
  /// Share of the illumination that is non-directional.
  double ambient = 0.3;
  /// Trace shadows cast by the relief onto the surface.
  bool cast_shadows = true;

  void validate() const;
};

/// Polyline strokes of a glyph in a unit box (x right, y down).
struct GlyphStroke {
  std::vector<PixelPoint> points;
};

/// Built-in stroke skeleton for A-Z letters of the legend alphabet plus 'I'.
const std::vector<GlyphStroke>& glyph_strokes(char symbol);
bool has_glyph(char symbol) noexcept;

/// image_size x image_size image of a single raised letter, shaded by a
/// directional light; letter and background share the same albedo.
GrayImage render_embossed_glyph(char symbol, const EmbossConfig& config);

/// Relief texture without any letter, used for the background class.
GrayImage render_background_patch(const EmbossConfig& config);

struct LetterCenter {
  char symbol = ' ';
  PixelPoint center;
  /// False for glyphs the classifier cannot recognize ('I').
  bool matchable = true;
};

struct RenderedWord {
  GrayImage image;
  std::vector<LetterCenter> letters;

  std::vector<PixelPoint> matchable_centers() const;
};

/// Letters at pitch 0.75*H with a margin of H/4 on both sides. The letter
/// centres follow a circular arc whose sagitta over the word width is
/// `curvature` * H (0 keeps a straight baseline).
RenderedWord render_word(const std::string& word, const EmbossConfig& config, double curvature,
                         const Alphabet& alphabet = Alphabet::legend_default());

struct CharacterSample {
  GrayImage image;
  Label label = kBackground;
};

struct CharacterSetParams {
  int per_class = 50;
  std::vector<double> light_azimuths{0.7853981633974483};
  EmbossConfig emboss;
  bool background = false;
};

/// per_class jittered variants per symbol (stroke width, relief, noise,
/// offset; seeds derived from emboss.seed) with azimuths cycling through
/// light_azimuths. Optional background snippets add one more class.
std::vector<CharacterSample> render_character_set(const Alphabet& alphabet,
                                                  const CharacterSetParams& params);

/// Single centred descriptor spanning the character: window = 3H/4 (per
/// the config) around the image centre, after pre-smoothing.
Descriptor describe_character(const GrayImage& img, const DescriptorConfig& config,
                              double smoothing_sigma = 1.0);

std::vector<LabeledDescriptor> build_training_set(const Alphabet& alphabet,
                                                  const CharacterSetParams& params,
                                                  const DescriptorConfig& descriptor,
                                                  double smoothing_sigma = 1.0);

/// Degrees to radians, for azimuth lists given on the command line.
double degrees_to_radians(double degrees) noexcept;

}  // namespace legend
