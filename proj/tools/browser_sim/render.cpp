#include "render.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace browser_sim {

namespace {

struct Canvas {
  int w, h;
  std::vector<std::uint8_t> rgb;

  Canvas(int width, int height, std::uint8_t gray)
      : w(width), h(height),
        rgb(static_cast<size_t>(width) * height * 3, gray) {}

  void fill_rect(int x, int y, int rw, int rh, std::array<std::uint8_t, 3> c) {
    int x0 = std::clamp(x, 0, w), x1 = std::clamp(x + rw, 0, w);
    int y0 = std::clamp(y, 0, h), y1 = std::clamp(y + rh, 0, h);
    for (int yy = y0; yy < y1; ++yy) {
      for (int xx = x0; xx < x1; ++xx) {
        size_t idx = (static_cast<size_t>(yy) * w + xx) * 3;
        rgb[idx] = c[0];
        rgb[idx + 1] = c[1];
        rgb[idx + 2] = c[2];
      }
    }
  }
};

std::array<std::uint8_t, 3> parse_color(const std::string& hex,
                                        std::array<std::uint8_t, 3> fallback) {
  if (hex.size() != 7 || hex[0] != '#') return fallback;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return 0;
  };
  return {static_cast<std::uint8_t>(nibble(hex[1]) * 16 + nibble(hex[2])),
          static_cast<std::uint8_t>(nibble(hex[3]) * 16 + nibble(hex[4])),
          static_cast<std::uint8_t>(nibble(hex[5]) * 16 + nibble(hex[6]))};
}

std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::uint32_t xorshift(std::uint32_t& s) {
  s ^= s << 13;
  s ^= s >> 17;
  s ^= s << 5;
  return s;
}

}  // namespace

std::string render_ppm(const PageModel& model) {
  Canvas canvas(model.viewport_w(), model.viewport_h(), 0xEE);

  for (const Element* panel : model.panels()) {
    auto it = panel->attrs.find("data-bbox");
    if (it == panel->attrs.end()) continue;
    auto bbox = parse_bbox(it->second);

    std::string render_mode = "points";
    auto mode = panel->attrs.find("data-render");
    if (mode != panel->attrs.end()) render_mode = mode->second;

    std::string fill_hex;
    auto fill = panel->attrs.find("data-fill");
    if (fill != panel->attrs.end()) fill_hex = fill->second;

    if (render_mode == "solid") {
      canvas.fill_rect(bbox[0], bbox[1], bbox[2], bbox[3],
                       parse_color(fill_hex, {0xDD, 0xDD, 0xDD}));
      continue;
    }

    // points: dark background plus a seeded scatter.
    canvas.fill_rect(bbox[0], bbox[1], bbox[2], bbox[3],
                     parse_color(fill_hex, {0x20, 0x28, 0x30}));
    int generation = model.generation("#" + panel->id);
    std::uint32_t seed = fnv1a(panel->id) ^
                         static_cast<std::uint32_t>(0x9E3779B9u * (generation + 1));
    if (seed == 0) seed = 1;
    int points = 40 + 10 * generation;
    for (int i = 0; i < points; ++i) {
      int px = bbox[0] + 2 +
               static_cast<int>(xorshift(seed) % std::max(bbox[2] - 4, 1));
      int py = bbox[1] + 2 +
               static_cast<int>(xorshift(seed) % std::max(bbox[3] - 4, 1));
      std::uint8_t shade =
          static_cast<std::uint8_t>(140 + (xorshift(seed) % 100));
      canvas.fill_rect(px, py, 2, 2, {shade, shade, 0x60});
    }
  }

  std::string out = "P6\n" + std::to_string(canvas.w) + " " +
                    std::to_string(canvas.h) + "\n255\n";
  out.append(reinterpret_cast<const char*>(canvas.rgb.data()),
             canvas.rgb.size());
  return out;
}

}  // namespace browser_sim
