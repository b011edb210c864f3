#include "orchid/error.hpp"
#include "orchid/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace orchid {

int HsHistogram::cell_of(double h, double s) noexcept {
  const int hbin = std::clamp(static_cast<int>(std::floor(h / 30.0)), 0, kHueBins - 1);
  const int sbin = std::clamp(static_cast<int>(std::floor(s * 6.0)), 0, kSatBins - 1);
  return hbin * kSatBins + sbin;
}

std::pair<double, double> HsHistogram::center(int i) noexcept {
  const int hbin = i / kSatBins;
  const int sbin = i % kSatBins;
  return {hbin * 30.0 + 15.0, (sbin + 0.5) / 6.0};
}

HsHistogram hs_histogram(const RgbImage& obj_img, const BinaryMask& mask) {
  if (obj_img.width() != mask.width() || obj_img.height() != mask.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask does not match image");
  }
  std::array<std::size_t, kColorCells> counts{};
  std::size_t total = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const HsPixel hs = rgb_to_hs(obj_img.at(x, y));
      ++counts[static_cast<std::size_t>(HsHistogram::cell_of(hs.h, hs.s))];
      ++total;
    }
  }
  if (total == 0) throw Error(ErrorCode::EmptyMask, "colour histogram of an empty mask");
  HsHistogram hist;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    hist.ch[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return hist;
}

DominantColorFeatures dominant_color_features(const HsHistogram& hist) {
  std::array<int, kColorCells> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return hist.ch[a] > hist.ch[b]; });

  // Background never enters the histogram, so the two most probable
  // foreground cells stand in for the second and third dominant colours.
  DominantColorFeatures out;
  auto fill = [&](int cell, double& dx, double& dy, double& p) {
    const auto [h, s] = HsHistogram::center(cell);
    const double rad = h * std::numbers::pi / 180.0;
    dx = s * std::cos(rad);
    dy = s * std::sin(rad);
    p = hist.ch[cell];
  };
  if (hist.ch[order[0]] > 0.0) {
    out.cell2 = order[0];
    fill(order[0], out.dx2, out.dy2, out.p2);
  }
  if (hist.ch[order[1]] > 0.0) {
    out.cell3 = order[1];
    fill(order[1], out.dx3, out.dy3, out.p3);
  }
  return out;
}

}  // namespace orchid
