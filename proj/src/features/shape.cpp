#include "orchid/error.hpp"
#include "orchid/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace orchid {
namespace {

long long cross(Point o, Point a, Point b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
         static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

std::vector<Point> convex_hull(std::span<const Point> input) {
  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    const Point& p = pts[i - 1];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double sign_log(double v) {
  const double sign = (v > 0.0) - (v < 0.0);
  return sign * std::log10(std::abs(v) + 1e-30);
}

}  // namespace

double aspect_ratio(std::span<const Point> boundary) {
  if (boundary.size() < 2) throw Error(ErrorCode::DegenerateShape, "aspect ratio needs two points");
  const std::vector<Point> hull = convex_hull(boundary);

  // Length: the diameter. Width: the narrowest caliper, i.e. the smallest
  // over hull edges of the farthest hull point from that edge's line.
  double length = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      length = std::max(length, std::hypot(hull[i].x - hull[j].x, hull[i].y - hull[j].y));
    }
  }
  if (length <= 0.0) throw Error(ErrorCode::DegenerateShape, "shape has zero length");

  double width = 0.0;
  if (hull.size() >= 3) {
    width = length;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point a = hull[i];
      const Point b = hull[(i + 1) % hull.size()];
      const double edge = std::hypot(b.x - a.x, b.y - a.y);
      double farthest = 0.0;
      for (const Point& p : hull) {
        farthest = std::max(farthest, std::abs(static_cast<double>(cross(a, b, p))) / edge);
      }
      width = std::min(width, farthest);
    }
  }
  // A one-pixel-thick run still has unit thickness.
  width = std::max(width, 1.0);
  return std::clamp(width / length, std::numeric_limits<double>::min(), 1.0);
}

double roundness(const RegionGeometry& geom) {
  if (geom.perimeter <= 0.0) throw Error(ErrorCode::DegenerateShape, "perimeter is zero");
  return 4.0 * std::numbers::pi * geom.area / (geom.perimeter * geom.perimeter);
}

HuMoments hu_moments(const BinaryMask& mask) {
  const BoundingBox box = bounding_box(mask);
  if (box.max_x < 0) throw Error(ErrorCode::EmptyMask, "moments of an empty mask");

  // Box-relative coordinates keep every value bit-identical under translation.
  double m00 = 0, m10 = 0, m01 = 0;
  for (int y = box.min_y; y <= box.max_y; ++y) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (!mask.at(x, y)) continue;
      m00 += 1;
      m10 += x - box.min_x;
      m01 += y - box.min_y;
    }
  }
  const double cx = m10 / m00, cy = m01 / m00;
  double mu20 = 0, mu02 = 0, mu11 = 0, mu30 = 0, mu03 = 0, mu21 = 0, mu12 = 0;
  for (int y = box.min_y; y <= box.max_y; ++y) {
    const double dy = (y - box.min_y) - cy;
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (!mask.at(x, y)) continue;
      const double dx = (x - box.min_x) - cx;
      mu20 += dx * dx;
      mu02 += dy * dy;
      mu11 += dx * dy;
      mu30 += dx * dx * dx;
      mu03 += dy * dy * dy;
      mu21 += dx * dx * dy;
      mu12 += dx * dy * dy;
    }
  }
  const double s2 = std::pow(m00, 2.0);
  const double s3 = std::pow(m00, 2.5);
  const double n20 = mu20 / s2, n02 = mu02 / s2, n11 = mu11 / s2;
  const double n30 = mu30 / s3, n03 = mu03 / s3, n21 = mu21 / s3, n12 = mu12 / s3;

  const double a = n30 + n12, b = n21 + n03;
  const double c = n30 - 3 * n12, d = 3 * n21 - n03;
  HuMoments hu;
  hu.raw[0] = n20 + n02;
  hu.raw[1] = (n20 - n02) * (n20 - n02) + 4 * n11 * n11;
  hu.raw[2] = c * c + d * d;
  hu.raw[3] = a * a + b * b;
  hu.raw[4] = c * a * (a * a - 3 * b * b) + d * b * (3 * a * a - b * b);
  hu.raw[5] = (n20 - n02) * (a * a - b * b) + 4 * n11 * a * b;
  hu.raw[6] = d * a * (a * a - 3 * b * b) - c * b * (3 * a * a - b * b);
  for (std::size_t i = 0; i < 7; ++i) hu.log_scaled[i] = sign_log(hu.raw[i]);
  return hu;
}

BoxCountSeries fractal_dimension(std::span<const Point> boundary) {
  if (boundary.empty()) throw Error(ErrorCode::DegenerateShape, "empty boundary");
  const BoundingBox box = bounding_box(boundary);
  const long long side = std::max(box.width(), box.height());
  BoxCountSeries series;
  double sum = 0.0;
  for (int level = 0; level < 4; ++level) {
    const int k = 4 + level;
    const long long n = 1LL << k;
    std::vector<char> occupied(static_cast<std::size_t>(n * n), 0);
    std::size_t boxes = 0;
    for (const Point& p : boundary) {
      const long long bx = (p.x - box.min_x) * n / side;
      const long long by = (p.y - box.min_y) * n / side;
      char& cell = occupied[static_cast<std::size_t>(by * n + bx)];
      if (!cell) {
        cell = 1;
        ++boxes;
      }
    }
    BoxCountLevel& out = series.levels[static_cast<std::size_t>(level)];
    out.k = k;
    out.boxes = boxes;
    out.dimension = std::log(static_cast<double>(boxes)) / std::log(static_cast<double>(n));
    sum += out.dimension;
  }
  series.mean_dimension = sum / 4.0;
  return series;
}

}  // namespace orchid
