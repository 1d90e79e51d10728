#pragma once

#include <filesystem>
#include <vector>

#include "legend/classifier.hpp"
#include "legend/descriptor.hpp"
#include "legend/image.hpp"

namespace legend {

/// Pixel rectangle [x0, x1) x [y0, y1).
struct Roi {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool operator==(const Roi&) const = default;
};

struct GridPoint {
  int x = 0;
  int y = 0;

  bool operator==(const GridPoint&) const = default;
  auto operator<=>(const GridPoint&) const = default;
};

/// Candidate character locations with per-location class scores. Locations
/// are sorted by x, then y.
struct ScoreMap {
  std::vector<GridPoint> locations;
  std::vector<ClassScores> scores;
  int stride = 1;
  int image_height = 0;
  Alphabet alphabet = Alphabet::legend_default();

  std::size_t size() const noexcept { return locations.size(); }
};

/// Inset of floor(H/4) on every side. Needs H >= 8 and a non-empty result.
Roi extract_roi(const GrayImage& img);
Roi extract_roi(int width, int height);

/// Points (x0 + i*stride, y0 + j*stride) inside the roi, x-major order.
std::vector<GridPoint> sample_grid(const Roi& roi, int stride);

/// max(1, H/20).
int default_stride(int image_height);

struct GridOptions {
  /// Pre-smoothing applied before gradients.
  double smoothing_sigma = 1.0;
  int threads = 1;
};

/// Descriptor field shared by the grid scorer and by character
/// classification: smooth, then central-difference gradients.
GradientField prepare_gradients(const GrayImage& img, double smoothing_sigma);

/// Scores every grid location of the ROI. The descriptor window is
/// character_window(H) centred on the location; a model trained with a
/// different descriptor config is rejected with ConfigMismatch.
ScoreMap score_grid(const GrayImage& img, const SvmModel& model, const DescriptorConfig& config,
                    int stride, const GridOptions& options = {});

/// Rescales to `reference_height` when the image height differs from it by
/// more than a factor of two; otherwise returns the image unchanged.
GrayImage normalize_word_height(const GrayImage& img, int reference_height);

/// CSV with columns x,y,score_<symbol>...
void export_score_map_csv(const ScoreMap& map, const std::filesystem::path& path);

}  // namespace legend
