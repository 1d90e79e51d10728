#include <cmath>
#include <map>
#include <numbers>

#include "legend/dataset.hpp"
#include "legend/error.hpp"

namespace legend {

namespace {

using Strokes = std::vector<GlyphStroke>;

GlyphStroke line(std::initializer_list<PixelPoint> points) { return GlyphStroke{points}; }

// Elliptic arc; angles in degrees, 0 = +x, increasing towards +y (down).
GlyphStroke arc(double cx, double cy, double rx, double ry, double from_deg, double to_deg) {
  constexpr int kSteps = 24;
  GlyphStroke stroke;
  for (int i = 0; i <= kSteps; ++i) {
    const double t = (from_deg + (to_deg - from_deg) * i / kSteps) * std::numbers::pi / 180.0;
    stroke.points.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
  }
  return stroke;
}

// Upper and lower bowls of B, P and R.
Strokes bowl(double top, double bottom, double right) {
  const double r = (bottom - top) / 2.0;
  const double straight = right - r;
  return {line({{0, top}, {straight, top}}), arc(straight, top + r, r, r, -90, 90),
          line({{straight, bottom}, {0, bottom}})};
}

Strokes join(std::initializer_list<Strokes> parts) {
  Strokes out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::map<char, Strokes> build_font() {
  std::map<char, Strokes> font;
  font['A'] = {line({{0, 1}, {0.5, 0}, {1, 1}}), line({{0.22, 0.6}, {0.78, 0.6}})};
  font['B'] = join({{line({{0, 0}, {0, 1}})}, bowl(0, 0.48, 0.85), bowl(0.48, 1, 1)});
  font['C'] = {arc(0.55, 0.5, 0.5, 0.5, 40, 320)};
  font['D'] = {line({{0, 0}, {0, 1}}), line({{0, 0}, {0.45, 0}}), arc(0.45, 0.5, 0.55, 0.5, -90, 90),
               line({{0.45, 1}, {0, 1}})};
  font['E'] = {line({{1, 0}, {0, 0}, {0, 1}, {1, 1}}), line({{0, 0.5}, {0.8, 0.5}})};
  font['F'] = {line({{1, 0}, {0, 0}, {0, 1}}), line({{0, 0.5}, {0.8, 0.5}})};
  font['G'] = {arc(0.55, 0.5, 0.5, 0.5, 40, 320), line({{0.6, 0.55}, {1.0, 0.55}, {1.0, 0.82}})};
  font['H'] = {line({{0, 0}, {0, 1}}), line({{1, 0}, {1, 1}}), line({{0, 0.5}, {1, 0.5}})};
  font['I'] = {line({{0.5, 0}, {0.5, 1}})};
  font['L'] = {line({{0, 0}, {0, 1}, {1, 1}})};
  font['M'] = {line({{0, 1}, {0, 0}, {0.5, 0.65}, {1, 0}, {1, 1}})};
  font['N'] = {line({{0, 1}, {0, 0}, {1, 1}, {1, 0}})};
  font['O'] = {arc(0.5, 0.5, 0.5, 0.5, 0, 360)};
  font['P'] = join({{line({{0, 0}, {0, 1}})}, bowl(0, 0.55, 1)});
  font['R'] = join({{line({{0, 0}, {0, 1}})}, bowl(0, 0.55, 1), {line({{0.4, 0.55}, {1, 1}})}});
  font['S'] = {arc(0.5, 0.25, 0.45, 0.25, 330, 90), arc(0.5, 0.75, 0.45, 0.25, 270, 510)};
  font['T'] = {line({{0, 0}, {1, 0}}), line({{0.5, 0}, {0.5, 1}})};
  font['V'] = {line({{0, 0}, {0.5, 1}, {1, 0}})};
  font['X'] = {line({{0, 0}, {1, 1}}), line({{1, 0}, {0, 1}})};
  return font;
}

const std::map<char, Strokes>& font() {
  static const std::map<char, Strokes> instance = build_font();
  return instance;
}

}  // namespace

bool has_glyph(char symbol) noexcept { return font().count(symbol) != 0; }

const std::vector<GlyphStroke>& glyph_strokes(char symbol) {
  const auto it = font().find(symbol);
  if (it == font().end()) {
    throw Error(ErrorCode::UnknownSymbol, std::string("no glyph for '") + symbol + "'");
  }
  return it->second;
}

}  // namespace legend
