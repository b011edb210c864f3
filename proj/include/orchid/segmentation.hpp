#pragma once

#include "orchid/imaging.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace orchid {

/// Partition of an image into 4-connected regions labelled 0..region_count-1.
struct RegionMap {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  int region_count = 0;

  int at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

struct OversegmentParams {
  int spatial_radius = 0;  // per-channel median prefilter radius, 0 disables
  int color_radius = 16;   // quantization step per channel
  int min_region = 10;     // regions below this many pixels are absorbed
};

RegionMap oversegment(const RgbImage& img, const OversegmentParams& params = {});

/// 16x16x16 RGB histogram, stored sparsely as sorted (bin, probability) pairs.
class ColorHistogram {
 public:
  static constexpr int kBinsPerChannel = 16;
  static constexpr int kBinCount = kBinsPerChannel * kBinsPerChannel * kBinsPerChannel;

  static int bin_of(Rgb c) noexcept { return (c.r / 16) * 256 + (c.g / 16) * 16 + (c.b / 16); }

  ColorHistogram() = default;
  /// Normalizes raw counts; throws EmptyRegion when they sum to zero.
  static ColorHistogram from_counts(const std::vector<std::pair<int, double>>& counts);

  double probability(int bin) const noexcept;
  const std::vector<std::pair<int, double>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<int, double>> entries_;
};

ColorHistogram region_histogram(const RgbImage& img, const RegionMap& regions, int id);

/// Bhattacharyya coefficient sum_k sqrt(a_k b_k).
double bhattacharyya(const ColorHistogram& a, const ColorHistogram& b) noexcept;

struct MarkerSet {
  std::vector<Point> object_pixels;
  std::vector<Point> background_pixels;
};

/// Decodes a marker PNG: pure green strokes mark object, pure red background.
MarkerSet markers_from_image(const RgbImage& marker_img);
MarkerSet load_marker_file(const std::filesystem::path& path);

/// Maps marker coordinates from an original-size image onto a resized one.
MarkerSet rescale_markers(const MarkerSet& markers, int from_w, int from_h, int to_w, int to_h);

/// Rasterizes a polyline into `out` using a square brush of the given width.
void rasterize_stroke(const std::vector<Point>& polyline, int brush_width, int width, int height,
                      std::vector<Point>& out);

/// Marker-driven maximal-similarity region merging. The union of the object
/// regions is passed through morph_cleanup(radius) before it is returned.
BinaryMask msrm_merge(const RgbImage& img, const RegionMap& regions, const MarkerSet& markers,
                      int cleanup_radius = 2);

/// Same merge, without the cleanup pass.
BinaryMask msrm_merge_raw(const RgbImage& img, const RegionMap& regions,
                          const MarkerSet& markers);

RgbImage apply_mask(const RgbImage& img, const BinaryMask& mask);

enum class SegStage { Flower, Lip, Done };

/// State of one interactive two-stage segmentation. The flower stage works on
/// the uploaded image; the lip stage works on the flower-masked image, so the
/// lip result always lies inside the flower result.
class SegSession {
 public:
  explicit SegSession(RgbImage image, OversegmentParams params = {}, int cleanup_radius = 2);

  const RgbImage& image() const noexcept { return image_; }
  const RegionMap& regions() const noexcept { return stage_ == SegStage::Lip ? lip_regions_ : regions_; }
  SegStage stage() const noexcept { return stage_; }
  const std::optional<BinaryMask>& flower_mask() const noexcept { return flower_; }
  const std::optional<BinaryMask>& lip_mask() const noexcept { return lip_; }
  const MarkerSet& markers() const noexcept { return markers_; }

  /// Image the current stage segments.
  const RgbImage& stage_image() const noexcept;

  /// Runs the merge for the current stage and stores the result.
  const BinaryMask& segment(const MarkerSet& markers);
  /// Flower -> Lip (requires a flower result), Lip -> Done (requires a lip result).
  void advance();

 private:
  RgbImage image_;
  OversegmentParams params_;
  int cleanup_radius_;
  RegionMap regions_;
  RgbImage flower_image_;
  RegionMap lip_regions_;
  MarkerSet markers_;
  SegStage stage_ = SegStage::Flower;
  std::optional<BinaryMask> flower_;
  std::optional<BinaryMask> lip_;
};

}  // namespace orchid
