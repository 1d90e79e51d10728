#include "legend/keypoint_grid.hpp"

#include <charconv>
#include <fstream>

#include "legend/error.hpp"
#include "legend/parallel.hpp"

namespace legend {

Roi extract_roi(int width, int height) {
  if (height < 8) {
    throw Error(ErrorCode::ImageTooSmall, "word image height " + std::to_string(height) + " < 8");
  }
  const int margin = height / 4;
  Roi roi{margin, margin, width - margin, height - margin};
  if (roi.x0 >= roi.x1 || roi.y0 >= roi.y1) {
    throw Error(ErrorCode::ImageTooSmall, "region of interest is empty");
  }
  return roi;
}

Roi extract_roi(const GrayImage& img) { return extract_roi(img.width(), img.height()); }

std::vector<GridPoint> sample_grid(const Roi& roi, int stride) {
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "grid stride must be >= 1");
  std::vector<GridPoint> points;
  for (int x = roi.x0; x < roi.x1; x += stride) {
    for (int y = roi.y0; y < roi.y1; y += stride) points.push_back({x, y});
  }
  return points;
}

int default_stride(int image_height) { return std::max(1, image_height / 20); }

GradientField prepare_gradients(const GrayImage& img, double smoothing_sigma) {
  return gradient_field(gaussian_smooth(img, smoothing_sigma));
}

ScoreMap score_grid(const GrayImage& img, const SvmModel& model, const DescriptorConfig& config,
                    int stride, const GridOptions& options) {
  config.validate();
  if (model.descriptor_config && !(*model.descriptor_config == config)) {
    throw Error(ErrorCode::ConfigMismatch, "model was trained with a different descriptor config");
  }
  if (model.dimension() != static_cast<std::size_t>(config.dimension())) {
    throw Error(ErrorCode::ConfigMismatch, "model dimension does not match descriptor config");
  }
  const Roi roi = extract_roi(img);
  const double window = character_window(img.height(), config);
  const GradientField field = prepare_gradients(img, options.smoothing_sigma);

  ScoreMap map;
  map.locations = sample_grid(roi, stride);
  map.stride = stride;
  map.image_height = img.height();
  map.alphabet = model.alphabet;
  map.scores.resize(map.locations.size());
  parallel_for(map.locations.size(), options.threads, [&](std::size_t i) {
    const GridPoint p = map.locations[i];
    const Descriptor d = compute_descriptor(
        field, {static_cast<double>(p.x), static_cast<double>(p.y)}, window, config);
    map.scores[i] = score(model, d);
  });
  return map;
}

GrayImage normalize_word_height(const GrayImage& img, int reference_height) {
  if (reference_height < 1) throw Error(ErrorCode::InvalidArgument, "reference height < 1");
  if (img.height() > 2 * reference_height || 2 * img.height() < reference_height) {
    return resize_to_height(img, reference_height);
  }
  return img;
}

void export_score_map_csv(const ScoreMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "x,y";
  for (char c : map.alphabet.symbols()) out << ",score_" << c;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < map.size(); ++i) {
    out << map.locations[i].x << ',' << map.locations[i].y;
    for (double s : map.scores[i].scores) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), s);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace legend
