#include "orchid/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace orchid {

RgbImage resize_to_limit(const RgbImage& img, int max_w, int max_h) {
  const int w = img.width();
  const int h = img.height();
  if (w <= max_w && h <= max_h) return img;

  // The binding axis lands exactly on its limit; the other is floored. Integer
  // arithmetic keeps 1200x1000 -> 600x500 free of rounding surprises.
  int new_w = 0;
  int new_h = 0;
  if (static_cast<std::int64_t>(max_w) * h <= static_cast<std::int64_t>(max_h) * w) {
    new_w = max_w;
    new_h = static_cast<int>(static_cast<std::int64_t>(h) * max_w / w);
  } else {
    new_h = max_h;
    new_w = static_cast<int>(static_cast<std::int64_t>(w) * max_h / h);
  }
  new_w = std::max(new_w, 1);
  new_h = std::max(new_h, 1);

  const double sx = static_cast<double>(w) / new_w;
  const double sy = static_cast<double>(h) / new_h;
  RgbImage out(new_w, new_h);
  for (int y = 0; y < new_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double ty = fy - y0;
    for (int x = 0; x < new_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double tx = fx - x0;
      const Rgb a = img.at(x0, y0), b = img.at(x1, y0), c = img.at(x0, y1), d = img.at(x1, y1);
      auto lerp = [&](std::uint8_t pa, std::uint8_t pb, std::uint8_t pc, std::uint8_t pd) {
        const double top = pa + (pb - pa) * tx;
        const double bottom = pc + (pd - pc) * tx;
        return static_cast<std::uint8_t>(std::lround(top + (bottom - top) * ty));
      };
      out.at(x, y) = {lerp(a.r, b.r, c.r, d.r), lerp(a.g, b.g, c.g, d.g),
                      lerp(a.b, b.b, c.b, d.b)};
    }
  }
  return out;
}

HsPixel rgb_to_hs(Rgb pixel) noexcept {
  const int r = pixel.r, g = pixel.g, b = pixel.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  if (mx == 0) return {0.0, 0.0};
  const double delta = mx - mn;
  const double s = delta / mx;
  if (delta == 0) return {0.0, s};
  double h = 0.0;
  if (mx == r) {
    h = 60.0 * ((g - b) / delta);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return {h, s};
}

}  // namespace orchid
