#pragma once

#include "orchid/imaging.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace orchid {

// Boundary-distance signature of a region: d_i for every boundary pixel, the
// means of the smallest and largest tenth, and the clamped normalized D_i.
struct ContourSignature {
  std::vector<double> distances;
  std::size_t n_boundary = 0;
  double r10 = 0.0;
  double r90 = 0.0;
  std::vector<double> normalized;
};

struct CcdSignature {
  std::array<double, 36> values{};
};

struct HuMoments {
  std::array<double, 7> raw{};
  /// sign(phi) * log10(|phi| + 1e-30), the form that enters the feature vector.
  std::array<double, 7> log_scaled{};
};

struct BoxCountLevel {
  int k = 0;             // grid of 2^k x 2^k boxes
  std::size_t boxes = 0; // occupied boxes N(s)
  double dimension = 0;  // log N(s) / log 2^k
};

struct BoxCountSeries {
  std::array<BoxCountLevel, 4> levels{};
  double mean_dimension = 0.0;
};

inline constexpr int kHueBins = 12;
inline constexpr int kSatBins = 6;
inline constexpr int kColorCells = kHueBins * kSatBins;

struct HsHistogram {
  std::array<double, kColorCells> ch{};  // index = hbin * 6 + sbin (cell number minus one)

  static int cell_of(double h, double s) noexcept;
  /// (hue degrees, saturation) at the centre of cell index `i` (zero based).
  static std::pair<double, double> center(int i) noexcept;
};

struct DominantColorFeatures {
  double dx2 = 0, dy2 = 0, p2 = 0;
  double dx3 = 0, dy3 = 0, p3 = 0;
  int cell2 = -1;  // zero-based cell of the first foreground dominant colour
  int cell3 = -1;
};

struct RegionFeatures {
  double sf1 = 0.0;
  double sf2 = 0.0;
  double roundness = 0.0;
  double aspect_ratio = 0.0;
  HuMoments hu;
  CcdSignature ccd;
  DominantColorFeatures color;
  BoxCountSeries fractal;
};

ContourSignature boundary_distances(std::span<const Point> boundary, Centroid c);
double sf1(const ContourSignature& sig);
double sf2(const ContourSignature& sig);
CcdSignature ccd36(std::span<const Point> boundary, Centroid c);
double aspect_ratio(std::span<const Point> boundary);
double roundness(const RegionGeometry& geom);
HuMoments hu_moments(const BinaryMask& mask);
BoxCountSeries fractal_dimension(std::span<const Point> boundary);
HsHistogram hs_histogram(const RgbImage& obj_img, const BinaryMask& mask);
DominantColorFeatures dominant_color_features(const HsHistogram& hist);

/// Runs every descriptor on one region. `mask` must already be cleaned
/// (single component, no holes); `obj_img` supplies the colours.
RegionFeatures extract_region_features(const RgbImage& obj_img, const BinaryMask& mask);

// -- 111-slot feature vector -------------------------------------------------

inline constexpr int kFeatureCount = 111;

enum class RegionKind { Flower, Lip };

enum class Descriptor { Sf1, Sf2, Roundness, Hu, Ccd, Color, Fractal, AspectRatio };

std::string_view to_string(Descriptor d) noexcept;

struct FeatureSlot {
  Descriptor descriptor;
  RegionKind region;  // fractal slots are computed on the flower region
  int component;      // zero-based position inside the descriptor
};

/// Slot of the 1-based feature index f (1..111).
FeatureSlot slot_of(int f);
/// Inverse of slot_of.
int feature_index(Descriptor d, RegionKind region, int component);

class FeatureVector {
 public:
  FeatureVector() { values_.fill(0.0); }

  /// 1-based access matching the f1..f111 naming.
  double f(int index) const { return values_.at(static_cast<std::size_t>(index - 1)); }
  double& f(int index) { return values_.at(static_cast<std::size_t>(index - 1)); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::vector<double> to_vector() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::array<double, kFeatureCount> values_;
};

/// Places flower and lip descriptors per the f1..f111 layout. Without a lip
/// (flower-only ablation) every lip slot is zero.
FeatureVector assemble_vector(const RegionFeatures& flower, const std::optional<RegionFeatures>& lip,
                              const BoxCountSeries& flower_fd);

}  // namespace orchid
