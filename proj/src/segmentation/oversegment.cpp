#include "orchid/error.hpp"
#include "orchid/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace orchid {
namespace {

RgbImage median_filter(const RgbImage& img, int radius) {
  if (radius <= 0) return img;
  RgbImage out(img.width(), img.height());
  std::vector<std::uint8_t> r, g, b;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      r.clear();
      g.clear();
      b.clear();
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int nx = std::clamp(x + dx, 0, img.width() - 1);
          const int ny = std::clamp(y + dy, 0, img.height() - 1);
          const Rgb p = img.at(nx, ny);
          r.push_back(p.r);
          g.push_back(p.g);
          b.push_back(p.b);
        }
      }
      const auto mid = r.size() / 2;
      std::nth_element(r.begin(), r.begin() + mid, r.end());
      std::nth_element(g.begin(), g.begin() + mid, g.end());
      std::nth_element(b.begin(), b.begin() + mid, b.end());
      out.at(x, y) = {r[mid], g[mid], b[mid]};
    }
  }
  return out;
}

struct Stats {
  std::size_t size = 0;
  double sum_r = 0, sum_g = 0, sum_b = 0;
};

double color_distance(const Stats& a, const Stats& b) {
  const double na = static_cast<double>(a.size), nb = static_cast<double>(b.size);
  const double dr = a.sum_r / na - b.sum_r / nb;
  const double dg = a.sum_g / na - b.sum_g / nb;
  const double db = a.sum_b / na - b.sum_b / nb;
  return dr * dr + dg * dg + db * db;
}

}  // namespace

RegionMap oversegment(const RgbImage& img, const OversegmentParams& params) {
  if (params.color_radius < 1) throw Error(ErrorCode::InvalidArgument, "color_radius must be >= 1");
  const RgbImage smooth = median_filter(img, params.spatial_radius);
  const int w = img.width(), h = img.height();
  const int step = params.color_radius;
  auto quantized = [&](int x, int y) {
    const Rgb p = smooth.at(x, y);
    return std::array<int, 3>{p.r / step, p.g / step, p.b / step};
  };

  // 4-connected components of identical quantized colour.
  std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
  std::vector<Stats> stats;
  std::deque<Point> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto idx = static_cast<std::size_t>(y) * w + x;
      if (labels[idx] >= 0) continue;
      const int id = static_cast<int>(stats.size());
      const auto key = quantized(x, y);
      Stats s;
      labels[idx] = id;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        const Rgb c = img.at(p.x, p.y);
        ++s.size;
        s.sum_r += c.r;
        s.sum_g += c.g;
        s.sum_b += c.b;
        const Point nbrs[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (const Point& n : nbrs) {
          if (!img.contains(n.x, n.y)) continue;
          const auto nidx = static_cast<std::size_t>(n.y) * w + n.x;
          if (labels[nidx] >= 0 || quantized(n.x, n.y) != key) continue;
          labels[nidx] = id;
          queue.push_back(n);
        }
      }
      stats.push_back(s);
    }
  }

  const int n = static_cast<int>(stats.size());
  std::vector<std::set<int>> adjacency(static_cast<std::size_t>(n));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = labels[static_cast<std::size_t>(y) * w + x];
      if (x + 1 < w) {
        const int b = labels[static_cast<std::size_t>(y) * w + x + 1];
        if (a != b) {
          adjacency[a].insert(b);
          adjacency[b].insert(a);
        }
      }
      if (y + 1 < h) {
        const int b = labels[static_cast<std::size_t>(y + 1) * w + x];
        if (a != b) {
          adjacency[a].insert(b);
          adjacency[b].insert(a);
        }
      }
    }
  }

  // Absorb undersized regions, smallest first, into the neighbour with the
  // closest mean colour (lowest id on ties).
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::set<std::pair<std::size_t, int>> small;
  for (int i = 0; i < n; ++i) {
    if (stats[i].size < static_cast<std::size_t>(params.min_region)) small.insert({stats[i].size, i});
  }
  int alive = n;
  while (!small.empty() && alive > 1) {
    const int r = small.begin()->second;
    small.erase(small.begin());
    int target = -1;
    double best = 0.0;
    for (int nb : adjacency[r]) {
      const double d = color_distance(stats[r], stats[nb]);
      if (target < 0 || d < best) {
        target = nb;
        best = d;
      }
    }
    if (target < 0) continue;
    small.erase({stats[target].size, target});
    parent[r] = target;
    stats[target].size += stats[r].size;
    stats[target].sum_r += stats[r].sum_r;
    stats[target].sum_g += stats[r].sum_g;
    stats[target].sum_b += stats[r].sum_b;
    for (int nb : adjacency[r]) {
      adjacency[nb].erase(r);
      if (nb != target) {
        adjacency[nb].insert(target);
        adjacency[target].insert(nb);
      }
    }
    adjacency[target].erase(r);
    adjacency[r].clear();
    --alive;
    if (stats[target].size < static_cast<std::size_t>(params.min_region)) {
      small.insert({stats[target].size, target});
    }
  }

  auto root = [&](int i) {
    while (parent[i] != i) i = parent[i];
    return i;
  };
  RegionMap map;
  map.width = w;
  map.height = h;
  map.labels.resize(labels.size());
  std::vector<int> compact(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int r = root(labels[i]);
    if (compact[r] < 0) compact[r] = next++;
    map.labels[i] = compact[r];
  }
  map.region_count = next;
  return map;
}

}  // namespace orchid
