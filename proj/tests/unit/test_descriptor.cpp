#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "legend/dataset.hpp"
#include "legend/descriptor.hpp"
#include "oracles.hpp"

using namespace legend;
using legend::testing::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

DescriptorConfig with_spectrum(SpectrumMode mode) {
  DescriptorConfig c;
  c.spectrum = mode;
  return c;
}

GrayImage scaled(const GrayImage& img, double k) {
  std::vector<double> v(img.pixels().begin(), img.pixels().end());
  for (double& x : v) x *= k;
  return GrayImage(img.width(), img.height(), std::move(v));
}

}  // namespace

TEST_CASE("fold_orientation") {
  const double deg = kPi / 180.0;
  CHECK(fold_orientation(200 * deg, SpectrumMode::Half180) == doctest::Approx(20 * deg));
  CHECK(fold_orientation(90 * deg, SpectrumMode::Half180) == doctest::Approx(90 * deg));
  CHECK(fold_orientation(270 * deg, SpectrumMode::Full360) == 270 * deg);
  CHECK(fold_orientation(0.0, SpectrumMode::Half180) == 0.0);

  for (int i = 0; i < 360; ++i) {
    const double t = i * deg;
    const double once = fold_orientation(t, SpectrumMode::Half180);
    CHECK(once >= 0.0);
    CHECK(once < kPi);
    CHECK(fold_orientation(once, SpectrumMode::Half180) == once);
  }
}

TEST_CASE("descriptor config") {
  const DescriptorConfig c;
  CHECK(c.dimension() == 128);
  CHECK(character_window(100, c) == 75.0);
  CHECK(character_window(4, c) == 3.0);
  DescriptorConfig whole = c;
  whole.scale_fraction = 1.0;
  CHECK(character_window(100, whole) == 100.0);
  CHECK(error_code_of([&] { character_window(3, c); }) == ErrorCode::ImageTooSmall);

  CHECK(with_spectrum(SpectrumMode::Half180).hash() != with_spectrum(SpectrumMode::Full360).hash());
  CHECK(c.hash() == DescriptorConfig{}.hash());

  CHECK(parse_spectrum(to_string(SpectrumMode::Half180)) == SpectrumMode::Half180);
  CHECK(parse_spectrum(to_string(SpectrumMode::Full360)) == SpectrumMode::Full360);
  CHECK(error_code_of([] { parse_spectrum("quarter"); }) == ErrorCode::InvalidArgument);

  DescriptorConfig odd = c;
  odd.bins_per_cell = 7;
  CHECK(error_code_of([&] { odd.validate(); }) == ErrorCode::InvalidArgument);
  DescriptorConfig wide = c;
  wide.scale_fraction = 1.5;
  CHECK(error_code_of([&] { wide.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("flat patch gives the zero vector") {
  const GradientField g = gradient_field(GrayImage(40, 40, 0.6));
  const Descriptor d = compute_descriptor(g, {20, 20}, 30, DescriptorConfig{});
  CHECK(d.size() == 128);
  CHECK(d.is_zero());
}

TEST_CASE("descriptor matches the brute-force reference") {
  for (SpectrumMode mode : {SpectrumMode::Half180, SpectrumMode::Full360}) {
    const DescriptorConfig config = with_spectrum(mode);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const GrayImage img = legend::testing::random_dyadic_image(48, 40, seed);
      const GradientField g = gradient_field(gaussian_smooth(img, 1.0));
      const PixelPoint centers[] = {{24, 20}, {3.5, 36.25}, {47, 0}, {30.7, 12.2}};
      for (PixelPoint c : centers) {
        for (double window : {8.0, 21.0, 30.0}) {
          const Descriptor d = compute_descriptor(g, c, window, config);
          const auto ref = legend::testing::reference_descriptor(g, c, window, config);
          REQUIRE(d.size() == ref.size());
          for (std::size_t i = 0; i < ref.size(); ++i) {
            CHECK(d.values[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
          }
        }
      }
    }
  }
}

TEST_CASE("normalized and clamped") {
  const GradientField g = gradient_field(legend::testing::random_dyadic_image(50, 50, 77));
  for (SpectrumMode mode : {SpectrumMode::Half180, SpectrumMode::Full360}) {
    const Descriptor d = compute_descriptor(g, {25, 25}, 37.5, with_spectrum(mode));
    CHECK(l2_norm(d.values) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : d.values) CHECK(v >= 0.0);
    CHECK(d.config_hash == with_spectrum(mode).hash());
  }
}

TEST_CASE("contrast scaling does not change the descriptor") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GrayImage img = legend::testing::random_dyadic_image(36, 36, seed);
    for (SpectrumMode mode : {SpectrumMode::Half180, SpectrumMode::Full360}) {
      const auto a = compute_descriptor(gradient_field(img), {18, 18}, 27, with_spectrum(mode));
      const auto b =
          compute_descriptor(gradient_field(scaled(img, 0.25)), {18, 18}, 27, with_spectrum(mode));
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("contrast reversal") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const GrayImage img = legend::testing::random_dyadic_image(32, 32, seed);
    const GradientField g = gradient_field(img);
    const GradientField n = gradient_field(negated(img));
    const PixelPoint c{15.5, 16.0};

    SUBCASE("Half180 is invariant") {
      const auto config = with_spectrum(SpectrumMode::Half180);
      const auto a = compute_descriptor(g, c, 24, config);
      const auto b = compute_descriptor(n, c, 24, config);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-9);
    }

    SUBCASE("Full360 swaps opposite bins") {
      const auto config = with_spectrum(SpectrumMode::Full360);
      const auto a = compute_descriptor(g, c, 24, config);
      const auto b = compute_descriptor(n, c, 24, config);
      const int bins = config.bins_per_cell;
      for (int cell = 0; cell < config.grid_cells * config.grid_cells; ++cell) {
        for (int bin = 0; bin < bins; ++bin) {
          const auto i = static_cast<std::size_t>(cell * bins + bin);
          const auto j = static_cast<std::size_t>(cell * bins + (bin + bins / 2) % bins);
          CHECK(std::abs(a.values[i] - b.values[j]) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("opposite lighting separates Full360 but not Half180") {
  // The rendered glyph is not an exact negative under a 180 degree light
  // change (shadows, noise), so only the averages are meaningful.
  double half = 0.0;
  double full = 0.0;
  const std::string symbols = "ACELMNRSV";
  for (char s : symbols) {
    EmbossConfig lit;
    lit.seed = 3;
    EmbossConfig opposite = lit;
    opposite.light_azimuth += kPi;
    const GrayImage a = render_embossed_glyph(s, lit);
    const GrayImage b = render_embossed_glyph(s, opposite);
    for (SpectrumMode mode : {SpectrumMode::Half180, SpectrumMode::Full360}) {
      const auto da = describe_character(a, with_spectrum(mode));
      const auto db = describe_character(b, with_spectrum(mode));
      double d2 = 0.0;
      for (std::size_t i = 0; i < da.size(); ++i) {
        d2 += (da.values[i] - db.values[i]) * (da.values[i] - db.values[i]);
      }
      (mode == SpectrumMode::Half180 ? half : full) += std::sqrt(d2) / symbols.size();
    }
  }
  CHECK(half <= 0.15);
  CHECK(full > 0.5);
}

TEST_CASE("descriptor preconditions") {
  const GradientField g = gradient_field(GrayImage(20, 10, 0.1));
  const DescriptorConfig c;
  CHECK(error_code_of([&] { compute_descriptor(g, {20, 5}, 8, c); }) ==
        ErrorCode::CenterOutOfBounds);
  CHECK(error_code_of([&] { compute_descriptor(g, {-0.5, 5}, 8, c); }) ==
        ErrorCode::CenterOutOfBounds);
  CHECK(error_code_of([&] { compute_descriptor(g, {5, 5}, 0.5, c); }) ==
        ErrorCode::WindowDegenerate);
  CHECK(error_code_of([&] { compute_descriptor(g, {5, 5}, std::nan(""), c); }) ==
        ErrorCode::WindowDegenerate);
  CHECK_FALSE(error_code_of([&] { compute_descriptor(g, {0, 0}, 8, c); }).has_value());
}
