#include "visforge/eval/image.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace visforge::eval {

namespace {

// Reads the next whitespace-delimited token, skipping '#' comments.
std::optional<long> next_int(std::string_view bytes, size_t& pos) {
  while (pos < bytes.size()) {
    if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  size_t start = pos;
  while (pos < bytes.size() &&
         std::isdigit(static_cast<unsigned char>(bytes[pos])))
    ++pos;
  if (pos == start) return std::nullopt;
  return std::stol(std::string(bytes.substr(start, pos - start)));
}

}  // namespace

std::optional<Image> Image::parse_ppm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    return std::nullopt;
  size_t pos = 2;
  auto w = next_int(bytes, pos);
  auto h = next_int(bytes, pos);
  auto maxval = next_int(bytes, pos);
  if (!w || !h || !maxval || *w <= 0 || *h <= 0 || *maxval != 255)
    return std::nullopt;
  ++pos;  // single whitespace after maxval
  size_t needed = static_cast<size_t>(*w) * static_cast<size_t>(*h) * 3;
  if (bytes.size() < pos + needed) return std::nullopt;

  Image img;
  img.width = static_cast<int>(*w);
  img.height = static_cast<int>(*h);
  img.rgb.assign(bytes.begin() + static_cast<long>(pos),
                 bytes.begin() + static_cast<long>(pos + needed));
  return img;
}

double Image::intensity_variance(int x, int y, int w, int h) const {
  int x0 = std::clamp(x, 0, width);
  int y0 = std::clamp(y, 0, height);
  int x1 = std::clamp(x + w, 0, width);
  int y1 = std::clamp(y + h, 0, height);
  long long count = static_cast<long long>(x1 - x0) * (y1 - y0);
  if (count <= 0) return 0.0;

  double sum = 0.0, sum_sq = 0.0;
  for (int yy = y0; yy < y1; ++yy) {
    for (int xx = x0; xx < x1; ++xx) {
      size_t idx = (static_cast<size_t>(yy) * width + xx) * 3;
      double luma = 0.2126 * rgb[idx] + 0.7152 * rgb[idx + 1] +
                    0.0722 * rgb[idx + 2];
      sum += luma;
      sum_sq += luma * luma;
    }
  }
  double mean = sum / static_cast<double>(count);
  return sum_sq / static_cast<double>(count) - mean * mean;
}

}  // namespace visforge::eval
