#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "legend/dataset.hpp"
#include "legend/error.hpp"
#include "legend/keypoint_grid.hpp"

namespace legend {

namespace {

constexpr double kGlyphHeightFraction = 0.5;
constexpr double kGlyphWidthFraction = 0.4;
constexpr double kPitchFraction = 0.75;
// Character-set jitter ranges (pixels, relative size, radians).
constexpr double kMaxOffset = 4.0;
constexpr double kMaxScaleChange = 0.1;
constexpr double kMaxRotation = 0.14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x2545f4914f6cdd1dull));
}

double segment_distance(PixelPoint p, PixelPoint a, PixelPoint b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len_sq = vx * vx + vy * vy;
  double t = 0.0;
  if (len_sq > 0.0) t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len_sq, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

// Placement of one glyph: centre, height in pixels and in-plane rotation
// (radians, counter-clockwise on screen).
struct GlyphPose {
  PixelPoint center;
  double height = 0.0;
  double rotation = 0.0;
};

// Anti-aliased stroke coverage of one glyph, max-combined into `coverage`.
void draw_glyph(std::vector<double>& coverage, int width, int height, char symbol,
                const GlyphPose& pose, double stroke_width) {
  const double glyph_height = pose.height;
  const double glyph_width = glyph_height * kGlyphWidthFraction / kGlyphHeightFraction;
  const double c = std::cos(pose.rotation);
  const double s = std::sin(pose.rotation);
  const auto place = [&](PixelPoint p) {
    const double u = (p.x - 0.5) * glyph_width;
    const double v = (p.y - 0.5) * glyph_height;
    return PixelPoint{pose.center.x + c * u + s * v, pose.center.y - s * u + c * v};
  };
  std::vector<std::pair<PixelPoint, PixelPoint>> segments;
  double min_x = pose.center.x, max_x = pose.center.x, min_y = pose.center.y, max_y = pose.center.y;
  for (const auto& stroke : glyph_strokes(symbol)) {
    for (std::size_t i = 1; i < stroke.points.size(); ++i) {
      const PixelPoint a = place(stroke.points[i - 1]);
      const PixelPoint b = place(stroke.points[i]);
      segments.push_back({a, b});
      min_x = std::min({min_x, a.x, b.x});
      max_x = std::max({max_x, a.x, b.x});
      min_y = std::min({min_y, a.y, b.y});
      max_y = std::max({max_y, a.y, b.y});
    }
  }
  const double half = stroke_width / 2.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - half - 1)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(max_x + half + 1)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - half - 1)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(max_y + half + 1)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : segments) d = std::min(d, segment_distance({double(x), double(y)}, a, b));
      const double cover = std::clamp(half - d + 0.5, 0.0, 1.0);
      auto& cell = coverage[static_cast<std::size_t>(y) * width + x];
      cell = std::max(cell, cover);
    }
  }
}

double sample_bilinear(const GrayImage& img, double x, double y) {
  if (x < 0.0 || y < 0.0 || x > img.width() - 1.0 || y > img.height() - 1.0) return 0.0;
  const int x0 = std::min(static_cast<int>(x), img.width() - 2 < 0 ? 0 : img.width() - 2);
  const int y0 = std::min(static_cast<int>(y), img.height() - 2 < 0 ? 0 : img.height() - 2);
  const double fx = x - x0;
  const double fy = y - y0;
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  return (img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx) * (1.0 - fy) +
         (img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx) * fy;
}

// Lambertian shading of relief_height * heights under a directional light
// plus an ambient term; a flat, unshadowed surface maps to 0.5.
GrayImage shade(const GrayImage& heights, const EmbossConfig& config, double relief_height,
                double noise_sigma, std::uint64_t noise_seed) {
  const int w = heights.width();
  const int h = heights.height();
  const double elevation = config.light_elevation;
  const double lx = std::cos(elevation) * std::cos(config.light_azimuth);
  const double lv = std::cos(elevation) * std::sin(config.light_azimuth);
  const double lz = std::sin(elevation);
  const double albedo = 0.5 / (config.ambient + (1.0 - config.ambient) * lz);
  // March towards the light in image coordinates (rows grow downwards).
  const double step_x = std::cos(config.light_azimuth);
  const double step_y = -std::sin(config.light_azimuth);
  const double rise = std::tan(elevation);
  const double max_march = relief_height / rise + 1.0;

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(0, x - 1);
      const int xp = std::min(w - 1, x + 1);
      const int ym = std::max(0, y - 1);
      const int yp = std::min(h - 1, y + 1);
      const double hx = relief_height * (heights(xp, y) - heights(xm, y)) / std::max(1, xp - xm);
      // v axis points up, image rows grow downwards.
      const double hv = -relief_height * (heights(x, yp) - heights(x, ym)) / std::max(1, yp - ym);
      const double norm = std::sqrt(hx * hx + hv * hv + 1.0);
      double direct = std::max(0.0, (-hx * lx - hv * lv + lz) / norm);
      if (config.cast_shadows && direct > 0.0 && relief_height > 0.0) {
        const double base = relief_height * heights(x, y);
        for (double t = 0.5; t <= max_march; t += 0.5) {
          const double hq = relief_height * sample_bilinear(heights, x + t * step_x, y + t * step_y);
          if (hq > base + t * rise) {
            direct = 0.0;
            break;
          }
        }
      }
      double value = albedo * (config.ambient + (1.0 - config.ambient) * direct);
      if (noise_sigma > 0.0) value += noise_sigma * noise(rng);
      out[static_cast<std::size_t>(y) * w + x] = std::clamp(value, 0.0, 1.0);
    }
  }
  return GrayImage(w, h, std::move(out));
}

GrayImage emboss(std::vector<double> coverage, int width, int height, const EmbossConfig& config,
                 double relief_height, double stroke_width, double noise_sigma) {
  const GrayImage heights = gaussian_smooth(GrayImage(width, height, std::move(coverage)),
                                            std::max(0.5, 0.35 * stroke_width));
  return shade(heights, config, relief_height, noise_sigma, splitmix64(config.seed));
}

// Glyph variant: offset from the image centre, size factor and rotation.
struct GlyphJitter {
  PixelPoint offset;
  double scale = 1.0;
  double rotation = 0.0;
};

GrayImage render_glyph_at(char symbol, const EmbossConfig& config, const GlyphJitter& jitter,
                          double relief_height, double stroke_width, double noise_sigma) {
  const int size = config.image_size;
  std::vector<double> coverage(static_cast<std::size_t>(size) * size, 0.0);
  const GlyphPose pose{{(size - 1) / 2.0 + jitter.offset.x, (size - 1) / 2.0 + jitter.offset.y},
                       kGlyphHeightFraction * size * jitter.scale, jitter.rotation};
  draw_glyph(coverage, size, size, symbol, pose, stroke_width);
  return emboss(std::move(coverage), size, size, config, relief_height, stroke_width, noise_sigma);
}

}  // namespace

void EmbossConfig::validate() const {
  if (image_size < 32) throw Error(ErrorCode::InvalidArgument, "image_size must be >= 32");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_sigma must be >= 0");
  if (!(stroke_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "stroke_width must be > 0");
  if (!(relief_height >= 0.0)) throw Error(ErrorCode::InvalidArgument, "relief_height must be >= 0");
  if (!std::isfinite(light_azimuth)) throw Error(ErrorCode::InvalidArgument, "bad light azimuth");
  if (!(light_elevation > 0.0 && light_elevation < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "light elevation must lie in (0, pi/2)");
  }
  if (!(ambient >= 0.0 && ambient < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ambient must lie in [0, 1)");
  }
}

double degrees_to_radians(double degrees) noexcept { return degrees * std::numbers::pi / 180.0; }

GrayImage render_embossed_glyph(char symbol, const EmbossConfig& config) {
  config.validate();
  if (!has_glyph(symbol)) {
    throw Error(ErrorCode::UnknownSymbol, std::string("no glyph for '") + symbol + "'");
  }
  return render_glyph_at(symbol, config, {}, config.relief_height, config.stroke_width,
                         config.noise_sigma);
}

GrayImage render_background_patch(const EmbossConfig& config) {
  config.validate();
  const int size = config.image_size;
  std::mt19937_64 rng(derive_seed(config.seed, 0xb9, 0));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> raw(static_cast<std::size_t>(size) * size);
  for (double& v : raw) v = uniform(rng);
  const GrayImage blurred = gaussian_smooth(GrayImage(size, size, std::move(raw)), 4.0);
  const auto [lo, hi] = std::minmax_element(blurred.pixels().begin(), blurred.pixels().end());
  const double span = std::max(*hi - *lo, 1e-12);
  std::vector<double> heights(blurred.pixels().size());
  std::transform(blurred.pixels().begin(), blurred.pixels().end(), heights.begin(),
                 [&](double v) { return (v - *lo) / span; });
  return emboss(std::move(heights), size, size, config, config.relief_height,
                config.stroke_width, config.noise_sigma);
}

std::vector<PixelPoint> RenderedWord::matchable_centers() const {
  std::vector<PixelPoint> out;
  for (const auto& l : letters) {
    if (l.matchable) out.push_back(l.center);
  }
  return out;
}

RenderedWord render_word(const std::string& word, const EmbossConfig& config, double curvature,
                         const Alphabet& alphabet) {
  config.validate();
  if (word.empty()) throw Error(ErrorCode::EmptyWord, "cannot render an empty word");
  for (char c : word) {
    if (!has_glyph(c) || (!alphabet.contains(c) && c != 'I')) {
      throw Error(ErrorCode::UnknownSymbol, std::string("no glyph for '") + c + "'");
    }
  }
  const int height = config.image_size;
  const double pitch = kPitchFraction * height;
  const int margin = height / 4;
  const double chord = pitch * static_cast<double>(word.size());
  const int width = static_cast<int>(std::lround(chord + 2.0 * margin));

  const double sagitta = std::abs(curvature) * height;
  const double direction = curvature < 0.0 ? -1.0 : 1.0;
  const double half = chord / 2.0;
  const double radius = sagitta > 0.0 ? (half * half + sagitta * sagitta) / (2.0 * sagitta) : 0.0;

  RenderedWord out;
  std::vector<double> coverage(static_cast<std::size_t>(width) * height, 0.0);
  for (std::size_t i = 0; i < word.size(); ++i) {
    const double x = margin + pitch * (static_cast<double>(i) + 0.5);
    double raise = 0.0;
    if (sagitta > 0.0) {
      const double u = x - (margin + half);
      raise = std::sqrt(radius * radius - u * u) - (radius - sagitta);
    }
    const PixelPoint center{x, (height - 1) / 2.0 - direction * raise};
    draw_glyph(coverage, width, height, word[i], {center, kGlyphHeightFraction * height, 0.0},
               config.stroke_width);
    out.letters.push_back({word[i], center, alphabet.contains(word[i])});
  }
  out.image = emboss(std::move(coverage), width, height, config, config.relief_height,
                     config.stroke_width, config.noise_sigma);
  return out;
}

std::vector<CharacterSample> render_character_set(const Alphabet& alphabet,
                                                  const CharacterSetParams& params) {
  params.emboss.validate();
  if (params.per_class < 1) throw Error(ErrorCode::InvalidArgument, "per_class must be >= 1");
  if (params.light_azimuths.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one light azimuth is required");
  }
  std::vector<Label> labels;
  for (std::size_t c = 0; c < alphabet.size(); ++c) {
    if (!has_glyph(alphabet.symbol(c))) {
      throw Error(ErrorCode::UnknownSymbol,
                  std::string("no glyph for '") + alphabet.symbol(c) + "'");
    }
    labels.push_back(static_cast<Label>(c));
  }
  if (params.background) labels.push_back(kBackground);

  std::vector<CharacterSample> samples;
  samples.reserve(labels.size() * static_cast<std::size_t>(params.per_class));
  for (std::size_t li = 0; li < labels.size(); ++li) {
    for (int k = 0; k < params.per_class; ++k) {
      const std::uint64_t variant_seed = derive_seed(params.emboss.seed, li, static_cast<std::uint64_t>(k));
      std::mt19937_64 rng(variant_seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      EmbossConfig cfg = params.emboss;
      cfg.seed = variant_seed;
      cfg.light_azimuth = params.light_azimuths[static_cast<std::size_t>(k) % params.light_azimuths.size()];
      const double stroke = cfg.stroke_width * (0.85 + 0.3 * unit(rng));
      const double relief = cfg.relief_height * (0.8 + 0.4 * unit(rng));
      const double noise = cfg.noise_sigma * (0.5 + unit(rng));
      GlyphJitter jitter;
      jitter.offset = {2.0 * kMaxOffset * unit(rng) - kMaxOffset,
                       2.0 * kMaxOffset * unit(rng) - kMaxOffset};
      jitter.scale = 1.0 + kMaxScaleChange * (2.0 * unit(rng) - 1.0);
      jitter.rotation = kMaxRotation * (2.0 * unit(rng) - 1.0);
      CharacterSample sample;
      sample.label = labels[li];
      if (labels[li] == kBackground) {
        cfg.relief_height = relief;
        cfg.noise_sigma = noise;
        sample.image = render_background_patch(cfg);
      } else {
        sample.image = render_glyph_at(alphabet.symbol(static_cast<std::size_t>(labels[li])), cfg,
                                       jitter, relief, stroke, noise);
      }
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

Descriptor describe_character(const GrayImage& img, const DescriptorConfig& config,
                              double smoothing_sigma) {
  const GradientField field = prepare_gradients(img, smoothing_sigma);
  const PixelPoint center{(img.width() - 1) / 2.0, (img.height() - 1) / 2.0};
  return compute_descriptor(field, center, character_window(img.height(), config), config);
}

std::vector<LabeledDescriptor> build_training_set(const Alphabet& alphabet,
                                                  const CharacterSetParams& params,
                                                  const DescriptorConfig& descriptor,
                                                  double smoothing_sigma) {
  std::vector<LabeledDescriptor> out;
  for (const auto& sample : render_character_set(alphabet, params)) {
    out.push_back({describe_character(sample.image, descriptor, smoothing_sigma), sample.label});
  }
  return out;
}

}  // namespace legend
