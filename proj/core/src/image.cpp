#include "legend/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "legend/error.hpp"

namespace legend {

namespace {

void check_dimensions(int width, int height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  if (!(fill >= 0.0 && fill <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fill intensity outside [0,1]");
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dimensions(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument,
                "pixel count " + std::to_string(data_.size()) + " != " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "intensity outside [0,1]");
    }
  }
}

GradientField::GradientField(int width, int height, std::vector<double> magnitude,
                             std::vector<double> orientation)
    : width_(width),
      height_(height),
      magnitude_(std::move(magnitude)),
      orientation_(std::move(orientation)) {
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (width < 0 || height < 0 || magnitude_.size() != n || orientation_.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "gradient field size mismatch");
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidSigma, "sigma must be > 0, got " + std::to_string(sigma));
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  const std::vector<double> taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = img.width();
  const int h = img.height();
  if (img.empty()) return img;

  std::vector<double> horizontal(img.pixels().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int sx = std::clamp(x + k, 0, w - 1);
        acc += taps[static_cast<std::size_t>(k + radius)] * img(sx, y);
      }
      horizontal[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }

  std::vector<double> out(horizontal.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int sy = std::clamp(y + k, 0, h - 1);
        acc += taps[static_cast<std::size_t>(k + radius)] *
               horizontal[static_cast<std::size_t>(sy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return GrayImage(w, h, std::move(out));
}

GradientField gradient_field(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::ImageTooSmall, "gradient needs at least 3x3 pixels, got " +
                                              std::to_string(w) + "x" + std::to_string(h));
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> magnitude(n, 0.0);
  std::vector<double> orientation(n, 0.0);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double dx = (img(x + 1, y) - img(x - 1, y)) / 2.0;
      const double dy = (img(x, y + 1) - img(x, y - 1)) / 2.0;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      magnitude[i] = std::hypot(dx, dy);
      if (magnitude[i] > 0.0) {
        double theta = std::atan2(dy, dx);
        if (theta < 0.0) theta += kTwoPi;
        // atan2 can return exactly -0 or a value that rounds to 2*pi.
        if (theta >= kTwoPi) theta -= kTwoPi;
        orientation[i] = theta;
      }
    }
  }
  return GradientField(w, h, std::move(magnitude), std::move(orientation));
}

GrayImage negated(const GrayImage& img) {
  std::vector<double> out(img.pixels().begin(), img.pixels().end());
  for (double& v : out) v = 1.0 - v;
  return GrayImage(img.width(), img.height(), std::move(out));
}

GrayImage resize_to_height(const GrayImage& img, int height) {
  if (height < 1 || img.empty()) {
    throw Error(ErrorCode::InvalidArgument, "resize needs a non-empty image and height >= 1");
  }
  const double scale = static_cast<double>(height) / img.height();
  const int width = std::max(1, static_cast<int>(std::lround(img.width() * scale)));
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const double sy = std::clamp((y + 0.5) / scale - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = sy - y0;
    for (int x = 0; x < width; ++x) {
      const double sx = std::clamp((x + 0.5) / scale - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = sx - x0;
      const double top = img(x0, y0) * (1.0 - fx) + img(x1, y0) * fx;
      const double bottom = img(x0, y1) * (1.0 - fx) + img(x1, y1) * fx;
      out[static_cast<std::size_t>(y) * width + x] =
          std::clamp(top * (1.0 - fy) + bottom * fy, 0.0, 1.0);
    }
  }
  return GrayImage(width, height, std::move(out));
}

}  // namespace legend
