#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "legend/image.hpp"

namespace legend {

/// Angular range covered by the orientation histogram. Half180 folds a
/// gradient and its opposite direction into the same bin, so a letter lit
/// from opposite sides yields the same descriptor.
enum class SpectrumMode { Full360, Half180 };

std::string_view to_string(SpectrumMode mode) noexcept;
SpectrumMode parse_spectrum(std::string_view text);

struct DescriptorConfig {
  int grid_cells = 4;
  int bins_per_cell = 8;
  SpectrumMode spectrum = SpectrumMode::Half180;
  /// Descriptor window = scale_fraction * image height.
  double scale_fraction = 0.75;

  /// Throws InvalidArgument unless grid_cells >= 1, bins_per_cell is even
  /// and >= 2, and 0 < scale_fraction <= 1.
  void validate() const;

  int dimension() const noexcept { return grid_cells * grid_cells * bins_per_cell; }

  /// Stable FNV-1a hash over the textual form of every field; models and
  /// descriptors compare it to catch mixed configurations.
  std::uint64_t hash() const;

  bool operator==(const DescriptorConfig&) const = default;
};

/// Orientation-histogram vector. `config_hash` is 0 for vectors that were
/// not produced by compute_descriptor (e.g. hand-made training data).
struct Descriptor {
  std::vector<double> values;
  std::uint64_t config_hash = 0;

  std::size_t size() const noexcept { return values.size(); }
  bool is_zero() const noexcept;
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Full360 leaves theta unchanged; Half180 returns theta mod pi.
double fold_orientation(double theta, SpectrumMode mode) noexcept;

/// SIFT-style descriptor with the reference orientation pinned at 0 rad.
///
/// The window x window square centred on `center` is split into
/// grid_cells^2 cells. Each pixel contributes its gradient magnitude,
/// weighted by a Gaussian of sigma = window/2, trilinearly over the two
/// nearest cells per axis and the two nearest orientation bins. Bins span
/// [0, 2*pi) or [0, pi) depending on the spectrum. The histogram is
/// L2-normalized, clamped at 0.2 and renormalized; a flat patch gives the
/// zero vector. Pixels outside the field contribute nothing.
Descriptor compute_descriptor(const GradientField& field, PixelPoint center, double window,
                              const DescriptorConfig& config);

/// scale_fraction * image_height. Requires image_height >= 4.
double character_window(int image_height, const DescriptorConfig& config);

}  // namespace legend
