#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace visforge::eval {

/// Binary PPM (P6) image, the lossless format the browser server emits.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  ///< 3 bytes per pixel, row-major

  static std::optional<Image> parse_ppm(std::string_view bytes);

  /// Variance of pixel luma over the given region (clamped to bounds).
  /// A solid fill scores 0; rendered content scores far above any
  /// reasonable blank-panel threshold.
  double intensity_variance(int x, int y, int w, int h) const;
};

}  // namespace visforge::eval
