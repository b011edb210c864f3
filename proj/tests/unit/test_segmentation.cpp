#include "doctest.h"

#include "orchid/error.hpp"
#include "orchid/random.hpp"
#include "orchid/segmentation.hpp"
#include "shapes.hpp"

#include <cmath>
#include <set>

using namespace orchid;
using namespace orchid::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an orchid::Error");
  return ErrorCode::Io;
}

RgbImage halves(int w, int h, Rgb left, Rgb right) {
  RgbImage img(w, h, left);
  for (int y = 0; y < h; ++y)
    for (int x = w / 2; x < w; ++x) img.at(x, y) = right;
  return img;
}

RegionMap bands(int band_w, int h, int count) {
  RegionMap m;
  m.width = band_w * count;
  m.height = h;
  m.region_count = count;
  m.labels.resize(static_cast<std::size_t>(m.width * h));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < m.width; ++x) m.labels[static_cast<std::size_t>(y * m.width + x)] = x / band_w;
  return m;
}

// Regions are nonempty and 4-connected, and labels cover [0, region_count).
void check_partition(const RegionMap& m) {
  REQUIRE(m.labels.size() == static_cast<std::size_t>(m.width * m.height));
  std::vector<int> sizes(static_cast<std::size_t>(m.region_count), 0);
  for (int l : m.labels) {
    REQUIRE(l >= 0);
    REQUIRE(l < m.region_count);
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (int s : sizes) CHECK(s > 0);
  std::vector<char> seen(m.labels.size(), 0);
  std::vector<int> components(static_cast<std::size_t>(m.region_count), 0);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (seen[static_cast<std::size_t>(y * m.width + x)]) continue;
      const int id = m.at(x, y);
      ++components[static_cast<std::size_t>(id)];
      std::vector<Point> stack{{x, y}};
      seen[static_cast<std::size_t>(y * m.width + x)] = 1;
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        const Point nb[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (Point q : nb) {
          if (q.x < 0 || q.y < 0 || q.x >= m.width || q.y >= m.height) continue;
          auto& s = seen[static_cast<std::size_t>(q.y * m.width + q.x)];
          if (!s && m.at(q.x, q.y) == id) {
            s = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  for (int c : components) CHECK(c == 1);
}

Rgb random_color(Rng& rng) {
  return {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
          static_cast<std::uint8_t>(rng.below(256))};
}

// Number of 4-connected components of the pixels equal to `value`.
int components4(const BinaryMask& m, bool value) {
  std::vector<char> seen(static_cast<std::size_t>(m.width() * m.height()), 0);
  int count = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.at(x, y) != value || seen[static_cast<std::size_t>(y * m.width() + x)]) continue;
      ++count;
      std::vector<Point> stack{{x, y}};
      seen[static_cast<std::size_t>(y * m.width() + x)] = 1;
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        const Point nb[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
        for (Point q : nb) {
          if (!m.contains(q.x, q.y) || m.at(q.x, q.y) != value) continue;
          auto& s = seen[static_cast<std::size_t>(q.y * m.width() + q.x)];
          if (!s) {
            s = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return count;
}

ColorHistogram random_histogram(Rng& rng) {
  std::vector<std::pair<int, double>> counts;
  const int n = 1 + static_cast<int>(rng.below(8));
  for (int i = 0; i < n; ++i) counts.emplace_back(static_cast<int>(rng.below(64)), 1.0 + rng.below(20));
  return ColorHistogram::from_counts(counts);
}

}  // namespace

TEST_SUITE("oversegment") {
  TEST_CASE("two solid halves give two regions") {
    const RegionMap m = oversegment(halves(40, 30, {200, 0, 0}, {0, 0, 200}), {0, 16, 10});
    CHECK(m.region_count == 2);
    check_partition(m);
  }
  TEST_CASE("solid image gives one region") {
    CHECK(oversegment(solid(50, 20, {7, 7, 7})).region_count == 1);
  }
  TEST_CASE("speckles below min_region are absorbed") {
    RgbImage img = halves(40, 30, {200, 0, 0}, {0, 0, 200});
    for (auto [x, y] : {std::pair{3, 3}, {8, 20}, {15, 10}, {30, 5}, {35, 25}}) img.at(x, y) = {0, 255, 0};
    const RegionMap m = oversegment(img, {0, 16, 10});
    CHECK(m.region_count == 2);
    check_partition(m);
  }
  TEST_CASE("property: partition invariants and minimum size on random mosaics") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
      const int w = 20 + static_cast<int>(rng.below(40)), h = 20 + static_cast<int>(rng.below(40));
      RgbImage img = solid(w, h, random_color(rng));
      for (int r = 0; r < 12; ++r) {
        const int x0 = static_cast<int>(rng.below(w)), y0 = static_cast<int>(rng.below(h));
        const int rw = 1 + static_cast<int>(rng.below(15)), rh = 1 + static_cast<int>(rng.below(15));
        const Rgb c = random_color(rng);
        for (int y = y0; y < std::min(h, y0 + rh); ++y)
          for (int x = x0; x < std::min(w, x0 + rw); ++x) img.at(x, y) = c;
      }
      const OversegmentParams params{0, 16, 10};
      const RegionMap m = oversegment(img, params);
      check_partition(m);
      std::vector<int> sizes(static_cast<std::size_t>(m.region_count), 0);
      for (int l : m.labels) ++sizes[static_cast<std::size_t>(l)];
      for (int s : sizes) CHECK(s >= params.min_region);
      const RegionMap again = oversegment(img, params);
      CHECK(again.labels == m.labels);
    }
  }
  TEST_CASE("median prefilter keeps the partition valid") {
    RgbImage img = halves(30, 30, {10, 200, 10}, {200, 10, 10});
    img.at(5, 5) = {255, 255, 255};
    const RegionMap m = oversegment(img, {1, 16, 1});
    CHECK(m.region_count == 2);
    check_partition(m);
  }
  TEST_CASE("color_radius below one is rejected") {
    CHECK(code_of([] { oversegment(solid(4, 4, {}), {0, 0, 10}); }) == ErrorCode::InvalidArgument);
  }
}

TEST_SUITE("histograms") {
  TEST_CASE("uniform red lands in bin (15,0,0)") {
    const RgbImage img = solid(5, 5, {255, 0, 0});
    const RegionMap m = oversegment(img);
    const ColorHistogram hist = region_histogram(img, m, 0);
    REQUIRE(hist.entries().size() == 1);
    CHECK(hist.entries()[0].first == 15 * 256);
    CHECK(hist.probability(15 * 256) == 1.0);
  }
  TEST_CASE("2 red + 2 blue gives two bins at one half") {
    RgbImage img(2, 2, {255, 0, 0});
    img.at(0, 1) = {0, 0, 255};
    img.at(1, 1) = {0, 0, 255};
    RegionMap m = bands(2, 2, 1);
    const ColorHistogram hist = region_histogram(img, m, 0);
    CHECK(hist.entries().size() == 2);
    CHECK(hist.probability(ColorHistogram::bin_of({255, 0, 0})) == 0.5);
    CHECK(hist.probability(ColorHistogram::bin_of({0, 0, 255})) == 0.5);
  }
  TEST_CASE("(0,0,0) and (15,15,15) share a bin") {
    RgbImage img(2, 1, {0, 0, 0});
    img.at(1, 0) = {15, 15, 15};
    const ColorHistogram hist = region_histogram(img, bands(2, 1, 1), 0);
    REQUIRE(hist.entries().size() == 1);
    CHECK(hist.probability(0) == 1.0);
  }
  TEST_CASE("empty counts are an EmptyRegion") {
    CHECK(code_of([] { ColorHistogram::from_counts({}); }) == ErrorCode::EmptyRegion);
  }
  TEST_CASE("bhattacharyya examples") {
    const ColorHistogram a = ColorHistogram::from_counts({{1, 1.0}});
    const ColorHistogram b = ColorHistogram::from_counts({{1, 1.0}, {2, 1.0}});
    const ColorHistogram c = ColorHistogram::from_counts({{7, 3.0}});
    CHECK(bhattacharyya(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bhattacharyya(a, c) == 0.0);
    CHECK(bhattacharyya(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  }
  TEST_CASE("property: symmetric, bounded, one iff equal") {
    Rng rng(77);
    for (int i = 0; i < 2000; ++i) {
      const ColorHistogram a = random_histogram(rng), b = random_histogram(rng);
      const double ab = bhattacharyya(a, b);
      CHECK(ab == bhattacharyya(b, a));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0 + 1e-12);
      double sum = 0.0;
      for (auto [bin, p] : a.entries()) sum += p;
      CHECK(std::abs(sum - 1.0) < 1e-9);
      CHECK(std::abs(bhattacharyya(a, a) - 1.0) < 1e-12);
      const bool equal = a.entries().size() == b.entries().size() &&
                         std::equal(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                    [](auto x, auto y) { return x.first == y.first && std::abs(x.second - y.second) < 1e-12; });
      CHECK((std::abs(ab - 1.0) < 1e-12) == equal);
    }
  }
}

TEST_SUITE("msrm") {
  TEST_CASE("two marked regions give exactly the object region") {
    const RgbImage img = halves(40, 20, {200, 0, 0}, {0, 0, 200});
    const RegionMap m = oversegment(img);
    const BinaryMask mask = msrm_merge_raw(img, m, {{{5, 5}}, {{35, 5}}});
    CHECK(mask == rect(40, 20, 0, 0, 20, 20));
  }
  TEST_CASE("A|B|C: B joins A through identical histograms") {
    RgbImage img(30, 10, {0, 180, 0});
    for (int y = 0; y < 10; ++y)
      for (int x = 20; x < 30; ++x) img.at(x, y) = {180, 0, 180};
    const RegionMap m = bands(10, 10, 3);
    const BinaryMask mask = msrm_merge_raw(img, m, {{{2, 5}}, {{25, 5}}});
    CHECK(mask == rect(30, 10, 0, 0, 20, 10));
  }
  TEST_CASE("background-first: an unlabeled region most similar to background goes there") {
    RgbImage img(30, 10, {0, 180, 0});
    for (int y = 0; y < 10; ++y)
      for (int x = 10; x < 30; ++x) img.at(x, y) = {180, 0, 180};
    const BinaryMask mask = msrm_merge_raw(img, bands(10, 10, 3), {{{2, 5}}, {{25, 5}}});
    CHECK(mask == rect(30, 10, 0, 0, 10, 10));
  }
  TEST_CASE("a region marked both ways is InvalidMarkers") {
    const RgbImage img = halves(40, 20, {200, 0, 0}, {0, 0, 200});
    const RegionMap m = oversegment(img);
    CHECK(code_of([&] { msrm_merge(img, m, {{{5, 5}, {30, 5}}, {{35, 5}}}); }) == ErrorCode::InvalidMarkers);
  }
  TEST_CASE("an empty marker side is InvalidMarkers") {
    const RgbImage img = halves(40, 20, {200, 0, 0}, {0, 0, 200});
    const RegionMap m = oversegment(img);
    CHECK(code_of([&] { msrm_merge(img, m, {{{5, 5}}, {}}); }) == ErrorCode::InvalidMarkers);
    CHECK(code_of([&] { msrm_merge(img, m, {{}, {{5, 5}}}); }) == ErrorCode::InvalidMarkers);
  }
  TEST_CASE("property: piecewise-constant object is recovered pixel-exactly from two strokes") {
    Rng rng(31);
    int accepted = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const int w = 80, h = 70;
      const double cx = rng.uniform(25, 55), cy = rng.uniform(25, 45);
      const BinaryMask obj = trial % 2 ? ellipse(w, h, cx, cy, rng.uniform(8, 18), rng.uniform(5, 15), rng.uniform(0, 180))
                                       : regular_star(w, h, cx, cy, rng.uniform(12, 20), rng.uniform(5, 9),
                                                      4 + static_cast<int>(rng.below(5)), rng.uniform(0, 90));
      // Thin star tips can rasterize as diagonal-only chains; such pixels form
      // separate flat regions, so the fixture keeps both sides 4-connected.
      if (components4(obj, true) != 1 || components4(obj, false) != 1) continue;
      ++accepted;
      Rgb fg = random_color(rng), bg = random_color(rng);
      while (ColorHistogram::bin_of(fg) == ColorHistogram::bin_of(bg)) bg = random_color(rng);
      const RgbImage img = paint(obj, fg, bg);
      const RegionMap regions = oversegment(img, {0, 16, 1});
      std::vector<Point> inside;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (obj.at(x, y)) inside.push_back({x, y});
      const Point o = inside[rng.below(inside.size())];
      const Point b{static_cast<int>(rng.below(5)), static_cast<int>(rng.below(h))};
      const BinaryMask raw = msrm_merge_raw(img, regions, {{o}, {b}});
      CHECK(raw == obj);
      CHECK(msrm_merge_raw(img, regions, {{o}, {b}}) == raw);
    }
    CHECK(accepted >= 20);
  }
  TEST_CASE("property: raw result keeps every object marker and no background marker") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
      const int w = 50, h = 40;
      RgbImage img(w, h);
      for (Rgb& p : img.pixels()) p = {static_cast<std::uint8_t>(rng.below(4) * 64), 0, 0};
      const RegionMap regions = oversegment(img, {0, 16, 10});
      std::set<int> obj_regions;
      MarkerSet markers;
      for (int i = 0; i < 6; ++i) {
        const Point p{static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h))};
        markers.object_pixels.push_back(p);
        obj_regions.insert(regions.at(p.x, p.y));
      }
      for (int i = 0; i < 6; ++i) {
        const Point p{static_cast<int>(rng.below(w)), static_cast<int>(rng.below(h))};
        if (!obj_regions.count(regions.at(p.x, p.y))) markers.background_pixels.push_back(p);
      }
      if (markers.background_pixels.empty()) continue;
      const BinaryMask raw = msrm_merge_raw(img, regions, markers);
      for (Point p : markers.object_pixels) CHECK(raw.at(p.x, p.y));
      for (Point p : markers.background_pixels) CHECK(!raw.at(p.x, p.y));
      const BinaryMask cleaned = msrm_merge(img, regions, markers, 0);
      CHECK(cleaned == morph_cleanup(raw, 0));
    }
  }
}

TEST_SUITE("apply_mask") {
  TEST_CASE("full, empty and checkerboard masks") {
    const RgbImage img = solid(6, 4, {255, 255, 255});
    CHECK(apply_mask(img, BinaryMask(6, 4, true)) == img);
    CHECK(apply_mask(img, BinaryMask(6, 4, false)) == solid(6, 4, {0, 0, 0}));
    BinaryMask checker(6, 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 6; ++x) checker.set(x, y, (x + y) % 2 == 0);
    const RgbImage out = apply_mask(img, checker);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 6; ++x)
        CHECK(out.at(x, y) == ((x + y) % 2 == 0 ? Rgb{255, 255, 255} : Rgb{0, 0, 0}));
  }
  TEST_CASE("dimension mismatch") {
    CHECK(code_of([] { apply_mask(solid(3, 3, {}), BinaryMask(3, 4)); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_SUITE("markers") {
  TEST_CASE("pure green is object, pure red background, all else ignored") {
    RgbImage img(4, 1, {0, 0, 0});
    img.at(0, 0) = {0, 255, 0};
    img.at(1, 0) = {255, 0, 0};
    img.at(2, 0) = {0, 254, 0};
    img.at(3, 0) = {255, 255, 255};
    const MarkerSet m = markers_from_image(img);
    CHECK(m.object_pixels == std::vector<Point>{{0, 0}});
    CHECK(m.background_pixels == std::vector<Point>{{1, 0}});
  }
  TEST_CASE("rescaling halves coordinates and removes duplicates") {
    const MarkerSet m = rescale_markers({{{0, 0}, {1, 1}, {10, 8}}, {{19, 19}}}, 20, 20, 10, 10);
    CHECK(m.object_pixels == std::vector<Point>{{0, 0}, {5, 4}});
    CHECK(m.background_pixels == std::vector<Point>{{9, 9}});
  }
  TEST_CASE("stroke rasterization") {
    std::vector<Point> out;
    rasterize_stroke({{0, 0}, {4, 0}}, 1, 10, 10, out);
    CHECK(out.size() == 5);
    out.clear();
    rasterize_stroke({{5, 5}}, 3, 10, 10, out);
    CHECK(out.size() == 9);
    out.clear();
    rasterize_stroke({{0, 0}}, 3, 10, 10, out);
    CHECK(out.size() == 4);  // clipped at the corner
  }
}

TEST_SUITE("SegSession") {
  RgbImage flower_scene() {
    // Black background, red flower disk, blue lip disk inside it.
    RgbImage img = paint(disk(80, 80, 40, 40, 30), {220, 30, 30});
    const BinaryMask lip = disk(80, 80, 40, 45, 10);
    for (int y = 0; y < 80; ++y)
      for (int x = 0; x < 80; ++x)
        if (lip.at(x, y)) img.at(x, y) = {30, 30, 220};
    return img;
  }

  TEST_CASE("two-stage workflow yields a lip inside the flower") {
    SegSession s(flower_scene(), {0, 16, 10}, 0);
    CHECK(s.stage() == SegStage::Flower);
    CHECK(code_of([&] { s.advance(); }) == ErrorCode::InvalidArgument);
    const BinaryMask flower = s.segment({{{40, 15}, {40, 45}}, {{2, 2}}});
    CHECK(flower == disk(80, 80, 40, 40, 30));
    s.advance();
    CHECK(s.stage() == SegStage::Lip);
    CHECK(s.stage_image() == apply_mask(s.image(), flower));
    CHECK(code_of([&] { s.advance(); }) == ErrorCode::InvalidArgument);
    const BinaryMask lip = s.segment({{{40, 45}}, {{40, 15}, {2, 2}}});
    for (int y = 0; y < 80; ++y)
      for (int x = 0; x < 80; ++x)
        if (lip.at(x, y)) CHECK(flower.at(x, y));
    CHECK(lip == disk(80, 80, 40, 45, 10));
    s.advance();
    CHECK(s.stage() == SegStage::Done);
    CHECK(code_of([&] { s.segment({{{40, 45}}, {{2, 2}}}); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("property: lip result never leaves the flower") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      SegSession s(flower_scene(), {0, 16, 10}, static_cast<int>(rng.below(3)));
      s.segment({{{40, 15}}, {{2, 2}}});
      s.advance();
      MarkerSet lip_markers;
      lip_markers.object_pixels.push_back({40, 45});
      for (int i = 0; i < 3; ++i)
        lip_markers.background_pixels.push_back({static_cast<int>(rng.below(80)), static_cast<int>(rng.below(10))});
      const BinaryMask lip = s.segment(lip_markers);
      const BinaryMask& flower = *s.flower_mask();
      for (int y = 0; y < 80; ++y)
        for (int x = 0; x < 80; ++x)
          if (lip.at(x, y)) REQUIRE(flower.at(x, y));
    }
  }
}
