#include "orchid/error.hpp"
#include "orchid/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace orchid {

ColorHistogram ColorHistogram::from_counts(const std::vector<std::pair<int, double>>& counts) {
  double total = 0.0;
  for (const auto& [bin, c] : counts) total += c;
  if (total <= 0.0) throw Error(ErrorCode::EmptyRegion, "histogram of an empty region");
  ColorHistogram hist;
  hist.entries_.reserve(counts.size());
  for (const auto& [bin, c] : counts) {
    if (c > 0.0) hist.entries_.emplace_back(bin, c / total);
  }
  std::sort(hist.entries_.begin(), hist.entries_.end());
  return hist;
}

double ColorHistogram::probability(int bin) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair<int, double>{bin, -1.0});
  return (it != entries_.end() && it->first == bin) ? it->second : 0.0;
}

ColorHistogram region_histogram(const RgbImage& img, const RegionMap& regions, int id) {
  std::map<int, double> counts;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (regions.at(x, y) == id) counts[ColorHistogram::bin_of(img.at(x, y))] += 1.0;
    }
  }
  return ColorHistogram::from_counts({counts.begin(), counts.end()});
}

double bhattacharyya(const ColorHistogram& a, const ColorHistogram& b) noexcept {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double rho = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      rho += std::sqrt(ea[i].second * eb[j].second);
      ++i;
      ++j;
    }
  }
  return std::min(rho, 1.0);
}

namespace {

enum class Label { Unlabeled, Object, Background };

class Merger {
 public:
  Merger(const RgbImage& img, const RegionMap& regions) : n_(regions.region_count) {
    counts_.resize(static_cast<std::size_t>(n_));
    adjacency_.resize(static_cast<std::size_t>(n_));
    labels_.assign(static_cast<std::size_t>(n_), Label::Unlabeled);
    alive_.assign(static_cast<std::size_t>(n_), true);
    parent_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) parent_[i] = i;

    const int w = regions.width, h = regions.height;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int a = regions.at(x, y);
        counts_[a][ColorHistogram::bin_of(img.at(x, y))] += 1.0;
        if (x + 1 < w) link(a, regions.at(x + 1, y));
        if (y + 1 < h) link(a, regions.at(x, y + 1));
      }
    }
    hists_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) refresh(i);
  }

  void seed(const MarkerSet& markers, const RegionMap& regions) {
    std::set<int> object, background;
    for (const Point& p : markers.object_pixels) {
      if (p.x >= 0 && p.y >= 0 && p.x < regions.width && p.y < regions.height) {
        object.insert(regions.at(p.x, p.y));
      }
    }
    for (const Point& p : markers.background_pixels) {
      if (p.x >= 0 && p.y >= 0 && p.x < regions.width && p.y < regions.height) {
        background.insert(regions.at(p.x, p.y));
      }
    }
    if (object.empty() || background.empty()) {
      throw Error(ErrorCode::InvalidMarkers, "both object and background markers are required");
    }
    for (int r : object) {
      if (background.count(r)) {
        throw Error(ErrorCode::InvalidMarkers,
                    "region " + std::to_string(r) + " carries both object and background markers");
      }
      labels_[r] = Label::Object;
    }
    for (int r : background) labels_[r] = Label::Background;
  }

  void run() {
    bool changed = true;
    while (changed) {
      changed = false;
      while (merge_into_background()) changed = true;
      while (merge_unlabeled_pairs()) changed = true;
    }
  }

  BinaryMask object_mask(const RegionMap& regions) {
    std::vector<char> inside(static_cast<std::size_t>(n_), 0);
    bool any_object = false;
    for (int i = 0; i < n_; ++i) {
      const Label l = labels_[root(i)];
      inside[i] = (l != Label::Background);
      any_object = any_object || l == Label::Object;
    }
    if (!any_object) throw Error(ErrorCode::NoObject, "object seeds were eliminated");
    BinaryMask mask(regions.width, regions.height);
    for (int y = 0; y < regions.height; ++y) {
      for (int x = 0; x < regions.width; ++x) {
        if (inside[regions.at(x, y)]) mask.set(x, y);
      }
    }
    return mask;
  }

 private:
  void link(int a, int b) {
    if (a == b) return;
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
  }

  int root(int i) const {
    while (parent_[i] != i) i = parent_[i];
    return i;
  }

  void refresh(int r) { hists_[r] = ColorHistogram::from_counts({counts_[r].begin(), counts_[r].end()}); }

  double similarity(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = sim_cache_.find(key);
    if (it != sim_cache_.end()) return it->second;
    const double s = bhattacharyya(hists_[a], hists_[b]);
    sim_cache_.emplace(key, s);
    return s;
  }

  // Neighbour of maximal similarity; lowest id wins ties (sets iterate ascending).
  int best_neighbor(int r) {
    int best = -1;
    double best_sim = -1.0;
    for (int nb : adjacency_[r]) {
      const double s = similarity(r, nb);
      if (s > best_sim) {
        best = nb;
        best_sim = s;
      }
    }
    return best;
  }

  // Folds region `from` into `into`; histograms combine by pixel counts.
  void merge(int from, int into) {
    for (const auto& [bin, c] : counts_[from]) counts_[into][bin] += c;
    counts_[from].clear();
    refresh(into);
    for (int nb : adjacency_[from]) sim_cache_.erase(std::minmax(from, nb));
    for (int nb : adjacency_[into]) sim_cache_.erase(std::minmax(into, nb));
    for (int nb : adjacency_[from]) {
      adjacency_[nb].erase(from);
      if (nb != into) link(nb, into);
    }
    adjacency_[into].erase(from);
    adjacency_[from].clear();
    parent_[from] = into;
    alive_[from] = false;
  }

  bool merge_into_background() {
    bool merged = false;
    for (int b = 0; b < n_; ++b) {
      if (!alive_[b] || labels_[b] != Label::Background) continue;
      const std::vector<int> neighbours(adjacency_[b].begin(), adjacency_[b].end());
      for (int u : neighbours) {
        if (!alive_[u] || labels_[u] != Label::Unlabeled) continue;
        if (best_neighbor(u) == b) {
          merge(u, b);
          merged = true;
        }
      }
    }
    return merged;
  }

  bool merge_unlabeled_pairs() {
    bool merged = false;
    for (int p = 0; p < n_; ++p) {
      if (!alive_[p] || labels_[p] != Label::Unlabeled) continue;
      const int q = best_neighbor(p);
      if (q < 0 || labels_[q] != Label::Unlabeled) continue;
      if (best_neighbor(q) != p) continue;
      merge(std::max(p, q), std::min(p, q));
      merged = true;
    }
    return merged;
  }

  int n_;
  std::vector<std::map<int, double>> counts_;
  std::vector<ColorHistogram> hists_;
  std::vector<std::set<int>> adjacency_;
  std::vector<Label> labels_;
  std::vector<bool> alive_;
  std::vector<int> parent_;
  std::map<std::pair<int, int>, double> sim_cache_;
};

}  // namespace

BinaryMask msrm_merge_raw(const RgbImage& img, const RegionMap& regions,
                          const MarkerSet& markers) {
  if (img.width() != regions.width || img.height() != regions.height) {
    throw Error(ErrorCode::DimensionMismatch, "region map does not match image");
  }
  Merger merger(img, regions);
  merger.seed(markers, regions);
  merger.run();
  // Regions still unlabeled at the fixpoint join the object.
  return merger.object_mask(regions);
}

BinaryMask msrm_merge(const RgbImage& img, const RegionMap& regions, const MarkerSet& markers,
                      int cleanup_radius) {
  return morph_cleanup(msrm_merge_raw(img, regions, markers), cleanup_radius);
}

RgbImage apply_mask(const RgbImage& img, const BinaryMask& mask) {
  if (img.width() != mask.width() || img.height() != mask.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask does not match image");
  }
  RgbImage out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.at(x, y)) out.at(x, y) = {0, 0, 0};
    }
  }
  return out;
}

}  // namespace orchid
