#include "orchid/error.hpp"
#include "orchid/imaging.hpp"

#include <algorithm>

namespace orchid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Decode: return "DecodeError";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::DegenerateShape: return "DegenerateShape";
    case ErrorCode::TooFewBoundaryPoints: return "TooFewBoundaryPoints";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::InvalidMarkers: return "InvalidMarkers";
    case ErrorCode::NoObject: return "NoObject";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InsufficientClasses: return "InsufficientClasses";
    case ErrorCode::TooFewSamplesPerClass: return "TooFewSamplesPerClass";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::InconsistentTaxonomy: return "InconsistentTaxonomy";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnsupportedClassCount: return "UnsupportedClassCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
  }
  return "Error";
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "mask dimensions must be positive");
  }
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BoundingBox bounding_box(const BinaryMask& mask) {
  BoundingBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      box.min_x = std::min(box.min_x, x);
      box.max_x = std::max(box.max_x, x);
      box.min_y = std::min(box.min_y, y);
      box.max_y = std::max(box.max_y, y);
    }
  }
  if (box.max_x < 0) return BoundingBox{};
  return box;
}

BoundingBox bounding_box(std::span<const Point> points) {
  if (points.empty()) return BoundingBox{};
  BoundingBox box{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Point& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.max_x = std::max(box.max_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

BinaryMask crop(const BinaryMask& mask, const BoundingBox& box, int margin) {
  if (box.width() < 1 || box.height() < 1) {
    throw Error(ErrorCode::EmptyMask, "cannot crop to an empty box");
  }
  BinaryMask out(box.width() + 2 * margin, box.height() + 2 * margin);
  for (int y = box.min_y; y <= box.max_y; ++y) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (mask.get(x, y)) out.set(x - box.min_x + margin, y - box.min_y + margin);
    }
  }
  return out;
}

}  // namespace orchid
