#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace orchid {

struct Point {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgb at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const Rgb> pixels() const noexcept { return pixels_; }
  std::span<Rgb> pixels() noexcept { return pixels_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Row-major boolean raster; true marks object pixels.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  /// Out-of-bounds reads are background.
  bool get(int x, int y) const noexcept { return contains(x, y) && bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value = true) { bits_[index(x, y)] = value ? 1 : 0; }

  std::size_t count() const noexcept;
  bool any() const noexcept { return count() > 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct HsPixel {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
};

struct Contour {
  std::vector<Point> points;
  std::size_t size() const noexcept { return points.size(); }
};

struct Centroid {
  double gx = 0.0;
  double gy = 0.0;
};

struct RegionGeometry {
  double area = 0.0;
  double perimeter = 0.0;
};

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = -1;
  int max_y = -1;
  int width() const noexcept { return max_x - min_x + 1; }
  int height() const noexcept { return max_y - min_y + 1; }
};

// -- I/O ------------------------------------------------------------------

RgbImage load_image(const std::filesystem::path& path);
RgbImage decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RgbImage& img);
void save_png(const RgbImage& img, const std::filesystem::path& path);

/// Masks are 8-bit grayscale PNG: 0 background, 255 object. On load any
/// nonzero gray level counts as object.
BinaryMask load_mask(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

// -- Transforms -------------------------------------------------------------

RgbImage resize_to_limit(const RgbImage& img, int max_w = 600, int max_h = 500);
HsPixel rgb_to_hs(Rgb pixel) noexcept;

// -- Morphology -------------------------------------------------------------

BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask fill_holes(const BinaryMask& mask);
BinaryMask largest_component(const BinaryMask& mask);
std::size_t count_components(const BinaryMask& mask);

/// Opening with a disk of `radius`, hole filling, then the largest
/// 8-connected component. Throws EmptyResult when nothing survives.
BinaryMask morph_cleanup(const BinaryMask& mask, int radius = 2);

// -- Geometry ---------------------------------------------------------------

Contour trace_contour(const BinaryMask& mask);
Centroid centroid_of(const BinaryMask& mask);
RegionGeometry region_geometry(const BinaryMask& mask, const Contour& contour);
BoundingBox bounding_box(const BinaryMask& mask);
BoundingBox bounding_box(std::span<const Point> points);

/// Copies the `box` window (expanded by `margin` background pixels on each
/// side) into a new mask whose origin is the window corner.
BinaryMask crop(const BinaryMask& mask, const BoundingBox& box, int margin = 0);

}  // namespace orchid
