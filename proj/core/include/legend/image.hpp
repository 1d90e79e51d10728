#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace legend {

/// Row-major grayscale image with intensities in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  /// Takes ownership of `data`; throws InvalidArgument when the size does
  /// not match or a value falls outside [0, 1].
  GrayImage(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator()(int x, int y) { return data_[index(x, y)]; }

  std::span<const double> pixels() const noexcept { return data_; }
  std::span<double> pixels() noexcept { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Per-pixel gradient magnitude and orientation (radians in [0, 2*pi)).
/// Border pixels carry magnitude 0 and orientation 0.
class GradientField {
 public:
  GradientField() = default;
  GradientField(int width, int height, std::vector<double> magnitude,
                std::vector<double> orientation);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  double magnitude(int x, int y) const { return magnitude_[index(x, y)]; }
  double orientation(int x, int y) const { return orientation_[index(x, y)]; }

  std::span<const double> magnitudes() const noexcept { return magnitude_; }
  std::span<const double> orientations() const noexcept { return orientation_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> magnitude_;
  std::vector<double> orientation_;
};

/// Reads PGM (P2/P5) or PNG (8-bit gray / RGB; other PNG flavours are
/// converted). Color is reduced by an equal-weight channel average.
GrayImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit binary PGM (P5); intensities are rounded to v*255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG.
void save_png(const GrayImage& img, const std::filesystem::path& path);

/// Separable Gaussian blur with radius ceil(3*sigma) and edge replication.
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

/// Normalized 1-D Gaussian taps of radius ceil(3*sigma); index 0 is the
/// left-most tap.
std::vector<double> gaussian_kernel(double sigma);

/// Central-difference gradients. Requires width, height >= 3.
GradientField gradient_field(const GrayImage& img);

/// 1 - I for every pixel.
GrayImage negated(const GrayImage& img);

/// Bilinear resampling to `height` rows, preserving the aspect ratio.
GrayImage resize_to_height(const GrayImage& img, int height);

}  // namespace legend
