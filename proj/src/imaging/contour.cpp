#include "orchid/error.hpp"
#include "orchid/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace orchid {
namespace {

// Index order is counterclockwise on screen (y grows downward).
constexpr Point kDirs[8] = {{1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}};

int direction_of(Point from, Point to) {
  const int dx = to.x - from.x, dy = to.y - from.y;
  for (int i = 0; i < 8; ++i) {
    if (kDirs[i].x == dx && kDirs[i].y == dy) return i;
  }
  return -1;
}

}  // namespace

Contour trace_contour(const BinaryMask& mask) {
  Point start{-1, -1};
  for (int y = 0; y < mask.height() && start.x < 0; ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) {
        start = {x, y};
        break;
      }
    }
  }
  if (start.x < 0) throw Error(ErrorCode::DegenerateShape, "mask has no object pixels");

  // Moore neighbour tracing. The backtrack pixel starts north of the
  // topmost-leftmost pixel, so the walk heads down the left flank first.
  Contour contour;
  Point current = start;
  int back_dir = 2;
  const std::size_t limit = 4 * static_cast<std::size_t>(mask.width()) * mask.height() + 8;
  while (true) {
    Point next{-1, -1};
    int next_back_dir = -1;
    for (int i = 1; i <= 8; ++i) {
      const int dir = (back_dir + i) % 8;
      const Point q{current.x + kDirs[dir].x, current.y + kDirs[dir].y};
      if (!mask.get(q.x, q.y)) continue;
      const int prev = (back_dir + i - 1) % 8;
      const Point backtrack{current.x + kDirs[prev].x, current.y + kDirs[prev].y};
      next = q;
      next_back_dir = direction_of(q, backtrack);
      break;
    }
    if (next.x < 0) break;  // isolated pixel
    if (current == start && contour.points.size() > 1 && next == contour.points[1]) break;
    contour.points.push_back(current);
    if (contour.points.size() > limit) {
      throw Error(ErrorCode::DegenerateShape, "contour tracing did not close");
    }
    current = next;
    back_dir = next_back_dir;
  }
  if (contour.points.empty()) contour.points.push_back(start);

  std::vector<Point> distinct = contour.points;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) {
    throw Error(ErrorCode::DegenerateShape,
                "component has " + std::to_string(distinct.size()) + " boundary pixels");
  }
  return contour;
}

Centroid centroid_of(const BinaryMask& mask) {
  const BoundingBox box = bounding_box(mask);
  if (box.max_x < 0) throw Error(ErrorCode::EmptyMask, "centroid of an empty mask");
  // Sums are taken relative to the box corner so integer shifts of the mask
  // shift the result by exactly the same amount.
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int y = box.min_y; y <= box.max_y; ++y) {
    for (int x = box.min_x; x <= box.max_x; ++x) {
      if (!mask.at(x, y)) continue;
      sx += x - box.min_x;
      sy += y - box.min_y;
      ++n;
    }
  }
  return {box.min_x + sx / static_cast<double>(n), box.min_y + sy / static_cast<double>(n)};
}

RegionGeometry region_geometry(const BinaryMask& mask, const Contour& contour) {
  RegionGeometry geom;
  geom.area = static_cast<double>(mask.count());
  const auto& pts = contour.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point a = pts[i];
    const Point b = pts[(i + 1) % pts.size()];
    const int dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y);
    if (dx == 0 && dy == 0) continue;
    geom.perimeter += (dx == 1 && dy == 1) ? std::sqrt(2.0) : 1.0;
  }
  return geom;
}

}  // namespace orchid
