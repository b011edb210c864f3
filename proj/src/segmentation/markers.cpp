#include "orchid/error.hpp"
#include "orchid/segmentation.hpp"

#include <algorithm>
#include <cstdlib>

namespace orchid {

MarkerSet markers_from_image(const RgbImage& marker_img) {
  MarkerSet markers;
  for (int y = 0; y < marker_img.height(); ++y) {
    for (int x = 0; x < marker_img.width(); ++x) {
      const Rgb p = marker_img.at(x, y);
      if (p == Rgb{0, 255, 0}) {
        markers.object_pixels.push_back({x, y});
      } else if (p == Rgb{255, 0, 0}) {
        markers.background_pixels.push_back({x, y});
      }
    }
  }
  return markers;
}

MarkerSet load_marker_file(const std::filesystem::path& path) {
  return markers_from_image(load_image(path));
}

MarkerSet rescale_markers(const MarkerSet& markers, int from_w, int from_h, int to_w, int to_h) {
  if (from_w == to_w && from_h == to_h) return markers;
  auto map = [&](const std::vector<Point>& in) {
    std::vector<Point> out;
    out.reserve(in.size());
    for (const Point& p : in) {
      out.push_back({static_cast<int>(static_cast<long long>(p.x) * to_w / from_w),
                     static_cast<int>(static_cast<long long>(p.y) * to_h / from_h)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return {map(markers.object_pixels), map(markers.background_pixels)};
}

void rasterize_stroke(const std::vector<Point>& polyline, int brush_width, int width, int height,
                      std::vector<Point>& out) {
  const int lo = -(brush_width - 1) / 2;
  const int hi = brush_width / 2;
  auto stamp = [&](int x, int y) {
    for (int dy = lo; dy <= hi; ++dy) {
      for (int dx = lo; dx <= hi; ++dx) {
        const int px = x + dx, py = y + dy;
        if (px >= 0 && py >= 0 && px < width && py < height) out.push_back({px, py});
      }
    }
  };
  if (polyline.size() == 1) stamp(polyline[0].x, polyline[0].y);
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    // Bresenham between consecutive vertices.
    int x0 = polyline[i - 1].x, y0 = polyline[i - 1].y;
    const int x1 = polyline[i].x, y1 = polyline[i].y;
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      stamp(x0, y0);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
}

SegSession::SegSession(RgbImage image, OversegmentParams params, int cleanup_radius)
    : image_(std::move(image)), params_(params), cleanup_radius_(cleanup_radius) {
  regions_ = oversegment(image_, params_);
}

const RgbImage& SegSession::stage_image() const noexcept {
  return stage_ == SegStage::Lip ? flower_image_ : image_;
}

const BinaryMask& SegSession::segment(const MarkerSet& markers) {
  switch (stage_) {
    case SegStage::Flower:
      flower_ = msrm_merge(image_, regions_, markers, cleanup_radius_);
      markers_ = markers;
      return *flower_;
    case SegStage::Lip: {
      BinaryMask lip = msrm_merge_raw(flower_image_, lip_regions_, markers);
      for (int y = 0; y < lip.height(); ++y) {
        for (int x = 0; x < lip.width(); ++x) {
          if (lip.at(x, y) && !flower_->at(x, y)) lip.set(x, y, false);
        }
      }
      lip_ = morph_cleanup(lip, cleanup_radius_);
      markers_ = markers;
      return *lip_;
    }
    case SegStage::Done:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "segmentation session is complete");
}

void SegSession::advance() {
  if (stage_ == SegStage::Flower) {
    if (!flower_) throw Error(ErrorCode::InvalidArgument, "no flower result to advance from");
    flower_image_ = apply_mask(image_, *flower_);
    lip_regions_ = oversegment(flower_image_, params_);
    markers_ = {};
    stage_ = SegStage::Lip;
  } else if (stage_ == SegStage::Lip) {
    if (!lip_) throw Error(ErrorCode::InvalidArgument, "no lip result to advance from");
    stage_ = SegStage::Done;
  }
}

}  // namespace orchid
