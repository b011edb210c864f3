#include "orchid/error.hpp"
#include "orchid/imaging.hpp"

#include <deque>

namespace orchid {
namespace {

// Digital disk dx^2 + dy^2 <= (r + 1/2)^2, so radius 1 is the full 3x3 block.
std::vector<Point> disk_offsets(int radius) {
  std::vector<Point> offsets;
  const int limit = radius * radius + radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= limit) offsets.push_back({dx, dy});
    }
  }
  return offsets;
}

constexpr Point kNeighbors8[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr Point kNeighbors4[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Labels 8-connected object components in raster order; returns label count.
int label_components(const BinaryMask& mask, std::vector<int>& labels,
                     std::vector<std::size_t>& sizes) {
  const int w = mask.width(), h = mask.height();
  labels.assign(static_cast<std::size_t>(w) * h, -1);
  sizes.clear();
  std::deque<Point> queue;
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || labels[idx] >= 0) continue;
      labels[idx] = next;
      std::size_t size = 0;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        ++size;
        for (const Point& d : kNeighbors8) {
          const int nx = p.x + d.x, ny = p.y + d.y;
          if (!mask.get(nx, ny)) continue;
          const auto nidx = static_cast<std::size_t>(ny) * w + nx;
          if (labels[nidx] >= 0) continue;
          labels[nidx] = next;
          queue.push_back({nx, ny});
        }
      }
      sizes.push_back(size);
      ++next;
    }
  }
  return next;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      bool keep = true;
      for (const Point& o : offsets) {
        if (!mask.get(x + o.x, y + o.y)) {
          keep = false;
          break;
        }
      }
      if (keep) out.set(x, y);
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      for (const Point& o : offsets) {
        if (mask.contains(x + o.x, y + o.y)) out.set(x + o.x, y + o.y);
      }
    }
  }
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  // Background reachable from the border through 4-connected steps.
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(w) * h, 0);
  std::deque<Point> queue;
  auto seed = [&](int x, int y) {
    const auto idx = static_cast<std::size_t>(y) * w + x;
    if (mask.at(x, y) || outside[idx]) return;
    outside[idx] = 1;
    queue.push_back({x, y});
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    for (const Point& d : kNeighbors4) {
      const int nx = p.x + d.x, ny = p.y + d.y;
      if (!mask.contains(nx, ny)) continue;
      seed(nx, ny);
    }
  }
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!outside[static_cast<std::size_t>(y) * w + x]) out.set(x, y);
    }
  }
  return out;
}

BinaryMask largest_component(const BinaryMask& mask) {
  std::vector<int> labels;
  std::vector<std::size_t> sizes;
  const int n = label_components(mask, labels, sizes);
  BinaryMask out(mask.width(), mask.height());
  if (n == 0) return out;
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (sizes[i] > sizes[best]) best = i;
  }
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (labels[static_cast<std::size_t>(y) * mask.width() + x] == best) out.set(x, y);
    }
  }
  return out;
}

std::size_t count_components(const BinaryMask& mask) {
  std::vector<int> labels;
  std::vector<std::size_t> sizes;
  return static_cast<std::size_t>(label_components(mask, labels, sizes));
}

BinaryMask morph_cleanup(const BinaryMask& mask, int radius) {
  if (!mask.any()) throw Error(ErrorCode::EmptyResult, "mask is empty");
  BinaryMask opened = dilate(erode(mask, radius), radius);
  if (!opened.any()) throw Error(ErrorCode::EmptyResult, "opening removed every object pixel");
  return largest_component(fill_holes(opened));
}

}  // namespace orchid
