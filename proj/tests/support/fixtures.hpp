#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "legend/classifier.hpp"
#include "legend/descriptor.hpp"
#include "legend/error.hpp"
#include "legend/image.hpp"
#include "legend/keypoint_grid.hpp"

namespace legend::testing {

/// Pixels are multiples of 1/256, so 1 - I is exact in double precision.
GrayImage random_dyadic_image(int width, int height, std::uint64_t seed);

/// `count` distinct locations inside [0, x_span) x [0, y_span), sorted by
/// (x, y), with uniform scores in [-2, 2].
ScoreMap random_score_map(std::uint64_t seed, std::size_t count, int x_span, int y_span,
                          const Alphabet& alphabet);

/// Model trained on a small synthetic glyph set lit from 45 degrees
/// (20 per class, C = 0.5). Built once per process.
const SvmModel& small_glyph_model(SpectrumMode mode);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Code of the legend::Error thrown by fn, or nullopt when it returns.
template <typename Fn>
std::optional<ErrorCode> error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace legend::testing
