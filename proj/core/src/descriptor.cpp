#include "legend/descriptor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "legend/error.hpp"

namespace legend {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClampCeiling = 0.2;
constexpr double kFlatNorm = 1e-12;

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

std::string_view to_string(SpectrumMode mode) noexcept {
  return mode == SpectrumMode::Full360 ? "full360" : "half180";
}

SpectrumMode parse_spectrum(std::string_view text) {
  if (text == "full360" || text == "360") return SpectrumMode::Full360;
  if (text == "half180" || text == "180") return SpectrumMode::Half180;
  throw Error(ErrorCode::InvalidArgument, "unknown spectrum mode '" + std::string(text) + "'");
}

void DescriptorConfig::validate() const {
  if (grid_cells < 1) throw Error(ErrorCode::InvalidArgument, "grid_cells must be >= 1");
  if (bins_per_cell < 2 || bins_per_cell % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "bins_per_cell must be even and >= 2");
  }
  if (!(scale_fraction > 0.0 && scale_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "scale_fraction must lie in (0, 1]");
  }
}

std::uint64_t DescriptorConfig::hash() const {
  const std::string text = "grid_cells=" + std::to_string(grid_cells) +
                           ";bins_per_cell=" + std::to_string(bins_per_cell) +
                           ";spectrum=" + std::string(to_string(spectrum)) +
                           ";scale_fraction=" + format_shortest(scale_fraction);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool Descriptor::is_zero() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

double fold_orientation(double theta, SpectrumMode mode) noexcept {
  if (mode == SpectrumMode::Full360) return theta;
  double folded = std::fmod(theta, std::numbers::pi);
  if (folded < 0.0) folded += std::numbers::pi;
  if (folded >= std::numbers::pi) folded = 0.0;
  return folded;
}

double character_window(int image_height, const DescriptorConfig& config) {
  config.validate();
  if (image_height < 4) {
    throw Error(ErrorCode::ImageTooSmall,
                "image height " + std::to_string(image_height) + " < 4");
  }
  return config.scale_fraction * image_height;
}

Descriptor compute_descriptor(const GradientField& field, PixelPoint center, double window,
                              const DescriptorConfig& config) {
  config.validate();
  if (!(window >= 1.0) || !std::isfinite(window)) {
    throw Error(ErrorCode::WindowDegenerate, "window must be >= 1 pixel");
  }
  if (!(center.x >= 0.0 && center.x < field.width() && center.y >= 0.0 &&
        center.y < field.height())) {
    throw Error(ErrorCode::CenterOutOfBounds, "descriptor center outside the image");
  }

  const int cells = config.grid_cells;
  const int bins = config.bins_per_cell;
  const double range = config.spectrum == SpectrumMode::Full360 ? kTwoPi : std::numbers::pi;
  const double cell = window / cells;
  const double sigma = window / 2.0;
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
  // Cell centres sit at integer bin coordinates 0..cells-1.
  const double bin_offset = cells / 2.0 - 0.5;
  const double reach = window / 2.0 + cell / 2.0;

  const int x_begin = std::max(0, static_cast<int>(std::ceil(center.x - reach)));
  const int x_end = std::min(field.width() - 1, static_cast<int>(std::floor(center.x + reach)));
  const int y_begin = std::max(0, static_cast<int>(std::ceil(center.y - reach)));
  const int y_end = std::min(field.height() - 1, static_cast<int>(std::floor(center.y + reach)));

  // Spatial weights separate into per-column and per-row factors.
  struct Axis {
    double gauss;
    int bin0;
    double frac;
  };
  const auto axis = [&](int begin, int end, double origin) {
    std::vector<Axis> out;
    out.reserve(static_cast<std::size_t>(std::max(0, end - begin + 1)));
    for (int p = begin; p <= end; ++p) {
      const double d = p - origin;
      const double bin = d / cell + bin_offset;
      const int bin0 = static_cast<int>(std::floor(bin));
      out.push_back({std::exp(-d * d * inv_two_sigma_sq), bin0, bin - bin0});
    }
    return out;
  };
  const std::vector<Axis> xs = axis(x_begin, x_end, center.x);
  const std::vector<Axis> ys = axis(y_begin, y_end, center.y);

  std::vector<double> hist(static_cast<std::size_t>(config.dimension()), 0.0);
  for (int py = y_begin; py <= y_end; ++py) {
    const Axis& ay = ys[static_cast<std::size_t>(py - y_begin)];
    for (int px = x_begin; px <= x_end; ++px) {
      const double mag = field.magnitude(px, py);
      if (mag == 0.0) continue;
      const Axis& ax = xs[static_cast<std::size_t>(px - x_begin)];
      const double contrib = mag * ax.gauss * ay.gauss;
      const double theta = fold_orientation(field.orientation(px, py), config.spectrum);
      const double bint = theta * bins / range - 0.5;
      const int bt0 = static_cast<int>(std::floor(bint));
      const double wt1 = bint - bt0;
      const int bt_lo = (bt0 % bins + bins) % bins;
      const int bt_hi = (bt_lo + 1) % bins;

      for (int iy = 0; iy < 2; ++iy) {
        const int by = ay.bin0 + iy;
        if (by < 0 || by >= cells) continue;
        const double wy = iy == 0 ? 1.0 - ay.frac : ay.frac;
        for (int ix = 0; ix < 2; ++ix) {
          const int bx = ax.bin0 + ix;
          if (bx < 0 || bx >= cells) continue;
          const double w = contrib * wy * (ix == 0 ? 1.0 - ax.frac : ax.frac);
          double* cell_hist = hist.data() + (static_cast<std::size_t>(by) * cells + bx) * bins;
          cell_hist[bt_lo] += w * (1.0 - wt1);
          cell_hist[bt_hi] += w * wt1;
        }
      }
    }
  }

  Descriptor out;
  out.config_hash = config.hash();
  const double norm = l2_norm(hist);
  if (!(norm > kFlatNorm)) {
    out.values.assign(hist.size(), 0.0);
    return out;
  }
  for (double& v : hist) v = std::min(v / norm, kClampCeiling);
  const double clamped_norm = l2_norm(hist);
  for (double& v : hist) v /= clamped_norm;
  out.values = std::move(hist);
  return out;
}

}  // namespace legend
